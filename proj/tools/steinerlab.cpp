#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "steinerlab/dynamics.hpp"
#include "steinerlab/experiments.hpp"
#include "steinerlab/io.hpp"
#include "steinerlab/sequences.hpp"
#include "steinerlab/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace steinerlab;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInvariantViolation = 2;
constexpr int kFail = 2;
constexpr int kInconclusive = 3;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat config schema; every key can also be given as a flag.
struct Config {
    std::optional<std::string> set_path;
    std::optional<std::string> builtin;
    std::optional<std::string> spec;
    std::optional<std::string> mode;
    std::optional<long> M;
    std::optional<double> h;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<long> keep_every;
    std::optional<long> dense_tail;
    std::optional<double> area_rate;
    std::optional<double> symmetry_tol;
    std::optional<double> simplify_tol;
    std::optional<double> tol;
    std::optional<std::vector<double>> deltas;
    std::optional<std::vector<double>> radii;
    std::optional<std::vector<long>> lags;
    std::optional<bool> symdiff;
};

template <class T>
void take(const json& j, const char* key, std::optional<T>& slot) {
    if (!j.contains(key)) return;
    try {
        slot = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InputError(std::string("config key '") + key + "' has the wrong type");
    }
}

Config read_config(const std::string& path) {
    json j;
    try {
        j = read_json(path);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    if (!j.is_object()) throw InputError(path + ": config must be a JSON object");
    static const std::set<std::string> known{"set",          "builtin",      "spec",   "mode",   "M",
                                             "h",            "out",          "seed",   "keep_every",
                                             "dense_tail",   "area_rate",    "symmetry_tol",
                                             "simplify_tol", "tol",          "deltas", "radii",  "lags",
                                             "symdiff"};
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) throw InputError(path + ": unknown config key '" + k + "'");
    }
    Config c;
    take(j, "set", c.set_path);
    take(j, "builtin", c.builtin);
    take(j, "spec", c.spec);
    take(j, "mode", c.mode);
    take(j, "M", c.M);
    take(j, "h", c.h);
    take(j, "out", c.out);
    take(j, "seed", c.seed);
    take(j, "keep_every", c.keep_every);
    take(j, "dense_tail", c.dense_tail);
    take(j, "area_rate", c.area_rate);
    take(j, "symmetry_tol", c.symmetry_tol);
    take(j, "simplify_tol", c.simplify_tol);
    take(j, "tol", c.tol);
    take(j, "deltas", c.deltas);
    take(j, "radii", c.radii);
    take(j, "lags", c.lags);
    take(j, "symdiff", c.symdiff);
    if (c.set_path) c.set_path = (fs::path(path).parent_path() / *c.set_path).lexically_normal().string();
    return c;
}

// Fields set in b win.
Config overlay(Config a, const Config& b) {
    auto pick = [](auto& x, const auto& y) {
        if (y) x = y;
    };
    pick(a.set_path, b.set_path);
    pick(a.builtin, b.builtin);
    if (b.set_path) a.builtin.reset();
    if (b.builtin) a.set_path.reset();
    pick(a.spec, b.spec);
    pick(a.mode, b.mode);
    pick(a.M, b.M);
    pick(a.h, b.h);
    pick(a.out, b.out);
    pick(a.seed, b.seed);
    pick(a.keep_every, b.keep_every);
    pick(a.dense_tail, b.dense_tail);
    pick(a.area_rate, b.area_rate);
    pick(a.symmetry_tol, b.symmetry_tol);
    pick(a.simplify_tol, b.simplify_tol);
    pick(a.tol, b.tol);
    pick(a.deltas, b.deltas);
    pick(a.radii, b.radii);
    pick(a.lags, b.lags);
    pick(a.symdiff, b.symdiff);
    return a;
}

struct Common {
    std::string config_path;
    Config flags;
    long fault_step = 0;
};

void add_common(CLI::App* app, Common& c, bool with_input) {
    app->add_option("--config", c.config_path, "JSON config file; flags override its keys");
    if (with_input) {
        auto* s = app->add_option_function<std::string>("--set", [&c](const std::string& v) { c.flags.set_path = v; },
                                                        "input set (JSON)");
        auto* b = app->add_option_function<std::string>("--builtin", [&c](const std::string& v) { c.flags.builtin = v; },
                                                        "named input set");
        s->excludes(b);
        app->add_option_function<std::string>("--spec", [&c](const std::string& v) { c.flags.spec = v; },
                                              "kronecker:ALPHA | powerlaw:THETA,SIGMA | finite:PATH | iid:SEED | explicit:PATH");
        app->add_option_function<long>("-M", [&c](long v) { c.flags.M = v; }, "number of steps");
        app->add_option_function<double>("--h", [&c](double v) { c.flags.h = v; }, "raster cell size");
    }
    app->add_option_function<std::string>("--out", [&c](const std::string& v) { c.flags.out = v; }, "output directory");
    app->add_option_function<std::uint64_t>("--seed", [&c](std::uint64_t v) { c.flags.seed = v; }, "random seed");
    app->add_option("--inject-area-fault", c.fault_step)->group("");
}

Config resolve(const Common& c) {
    Config base;
    if (!c.config_path.empty()) base = read_config(c.config_path);
    return overlay(base, c.flags);
}

std::string default_out(const std::string& leaf) {
    const char* root = std::getenv("STEINERLAB_OUT");
    return (fs::path(root && *root ? root : "steinerlab_out") / leaf).string();
}

CompactSet load_input(const Config& c, const std::string& fallback_builtin) {
    try {
        if (c.set_path) return load_set(*c.set_path);
        return builtin_set(c.builtin.value_or(fallback_builtin));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    } catch (const FormatError& e) {
        throw InputError(e.what());
    } catch (const GeometryError& e) {
        throw InputError(e.what());
    }
}

DirectionSpec load_spec(const std::string& text, std::uint64_t seed) {
    try {
        DirectionSpec s = parse_spec(text == "iid" ? "iid:" + std::to_string(seed) : text);
        check_spec(s);
        return s;
    } catch (const SpecError& e) {
        throw InputError(e.what());
    } catch (const FormatError& e) {
        throw InputError(e.what());
    }
}

json input_json(const Config& c, const std::string& fallback_builtin) {
    if (c.set_path) return {{"set", *c.set_path}};
    return {{"builtin", c.builtin.value_or(fallback_builtin)}};
}

void write_manifest(const std::string& dir, const std::string& command, const json& config, const json& outputs) {
    fs::create_directories(dir);
    write_json({{"tool", "steinerlab"}, {"command", command}, {"config", config}, {"outputs", outputs}},
               (fs::path(dir) / "manifest.json").string());
}

// --- run ------------------------------------------------------------------

int cmd_run(const Common& common) {
    const Config c = resolve(common);
    const std::uint64_t seed = c.seed.value_or(0);
    const CompactSet K = load_input(c, "square");
    const std::string spec_text = c.spec.value_or("kronecker:1");
    const DirectionSpec spec = load_spec(spec_text, seed);
    Mode mode;
    try {
        mode = parse_mode(c.mode.value_or("plain"));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    const long M = c.M.value_or(100);
    if (M < 1) throw InputError("M must be at least 1");
    const double h = c.h.value_or(diameter(K) / 512);
    if (!(h > 0)) throw InputError("h must be positive");
    const std::string out = c.out.value_or(default_out("run"));

    DynamicsOptions d;
    d.storage.keep_every = c.keep_every.value_or(std::max(1L, M / 10));
    d.storage.dense_tail = c.dense_tail.value_or(std::max(1L, M / 10));
    if (d.storage.keep_every < 1 || d.storage.dense_tail < 0) throw InputError("keep_every >= 1 and dense_tail >= 0");
    if (c.area_rate) d.area_rate = *c.area_rate;
    if (c.symmetry_tol) d.symmetry_tol = *c.symmetry_tol;
    if (c.simplify_tol) d.simplify_tol = *c.simplify_tol;
    d.area_fault_step = common.fault_step;
    const std::vector<double> deltas = c.deltas.value_or(std::vector<double>{h * 8, diameter(K) / 8});
    const std::vector<double> radii = c.radii.value_or(std::vector<double>{diameter(K) / 4, diameter(K) / 2});
    const std::vector<long> lags = c.lags.value_or(std::vector<long>{1, 10});
    const bool with_symdiff = c.symdiff.value_or(true);

    json config = {{"input", input_json(c, "square")},
                   {"spec", describe(spec)},
                   {"spec_keys", spec_to_keys(spec)},
                   {"mode", to_string(mode)},
                   {"M", M},
                   {"h", h},
                   {"out", out},
                   {"seed", seed},
                   {"keep_every", d.storage.keep_every},
                   {"dense_tail", d.storage.dense_tail},
                   {"area_rate", d.area_rate},
                   {"symmetry_tol", d.symmetry_tol},
                   {"simplify_tol", d.simplify_tol},
                   {"deltas", deltas},
                   {"radii", radii},
                   {"lags", lags},
                   {"symdiff", with_symdiff}};
    if (common.fault_step > 0) config["inject_area_fault"] = common.fault_step;

    Trajectory t;
    try {
        t = iterate(mode, K, spec, M, d);
    } catch (const HypothesisError& e) {
        throw InputError(e.what());
    } catch (const InvariantViolation& e) {
        write_manifest(out, "run", config, {{"status", "invariant violation"}, {"message", e.what()}});
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return kInvariantViolation;
    }
    for (const auto& w : t.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    write_checkpoints(t, (fs::path(out) / "trajectory").string());
    const MonitorTable mon = monitor(t, deltas, radii, h);
    write_monitor_csv(mon, (fs::path(out) / "monitor.csv").string());
    const auto rows = cauchy_diagnostics(t, lags, h, with_symdiff);
    write_cauchy_csv(rows, (fs::path(out) / "diagnostics.csv").string());
    save_svg(t.steps.front().set, (fs::path(out) / "initial.svg").string());
    save_svg(t.last().set, (fs::path(out) / "final.svg").string());
    write_manifest(out, "run", config,
                   {{"status", "ok"},
                    {"trajectory", "trajectory/manifest.json"},
                    {"monitor", "monitor.csv"},
                    {"diagnostics", "diagnostics.csv"},
                    {"svg", {"initial.svg", "final.svg"}},
                    {"stored_steps", t.steps.size()},
                    {"monitor_flags", mon.flags.size()},
                    {"warnings", t.warnings}});
    std::printf("run: %ld steps, %zu stored, final area %.17g, monitor flags %zu -> %s\n", M, t.steps.size(),
                area(t.last().set), mon.flags.size(), out.c_str());
    return kOk;
}

// --- verify ---------------------------------------------------------------

int cmd_verify(const Common& common, const std::string& suite, long n_cases) {
    const Config c = resolve(common);
    const std::uint64_t seed = c.seed.value_or(42);
    const std::string out = c.out.value_or(default_out("verify"));
    std::vector<SuiteResult> results;
    try {
        results = run_suites(suite, n_cases, seed);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    bool ok = true;
    json suites = json::array();
    for (const auto& r : results) {
        std::fputs(r.summary().c_str(), stdout);
        suites.push_back(r.to_json());
        ok = ok && r.ok();
    }
    fs::create_directories(out);
    write_json({{"suites", suites}, {"ok", ok}}, (fs::path(out) / "verify.json").string());
    write_manifest(out, "verify", {{"suite", suite}, {"n_cases", n_cases}, {"seed", seed}, {"out", out}},
                   {{"results", "verify.json"}, {"ok", ok}});
    std::printf("verify %s: %s\n", suite.c_str(), ok ? "all properties hold" : "violations found");
    return ok ? kOk : kFail;
}

// --- reproduce ------------------------------------------------------------

int cmd_reproduce(const Common& common, const std::string& id) {
    const auto ids = experiment_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        std::string list;
        for (const auto& v : ids) list += (list.empty() ? "" : ", ") + v;
        throw InputError("unknown experiment id '" + id + "' (valid: " + list + ")");
    }
    const Config c = resolve(common);
    const std::uint64_t seed = c.seed.value_or(0);
    ReproduceOverrides ov;
    ov.M = c.M;
    if (ov.M && *ov.M < 1) throw InputError("M must be at least 1");
    if (c.spec) ov.spec = load_spec(*c.spec, seed);
    if (c.set_path || c.builtin) ov.K = load_input(c, "");
    ExperimentOptions o;
    o.out_dir = c.out.value_or(default_out(id));
    if (c.h) o.h = *c.h;
    if (c.tol) o.tol = *c.tol;
    o.area_fault_step = common.fault_step;

    json config = {{"id", id}, {"out", o.out_dir}, {"h", c.h ? json(*c.h) : json("diameter/512")}, {"tol", o.tol}};
    if (ov.M) config["M"] = *ov.M;
    if (ov.spec) config["spec"] = describe(*ov.spec);
    if (ov.K) config["input"] = input_json(c, "");
    if (common.fault_step > 0) config["inject_area_fault"] = common.fault_step;

    ExperimentReport r;
    try {
        r = reproduce(id, ov, o);
    } catch (const Refused& e) {
        throw InputError(std::string("refused: ") + e.what());
    } catch (const SpecError& e) {
        throw InputError(e.what());
    }
    write_manifest(o.out_dir, "reproduce", config, {{"report", "report.json"}, {"verdict", to_string(r.verdict)}});
    for (const auto& ch : r.checks) {
        std::printf("  %-44s %s  %.6g %s %.6g\n", ch.name.c_str(), ch.passed ? "ok  " : "FAIL", ch.value,
                    ch.relation.c_str(), ch.threshold);
    }
    for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    for (const auto& n : r.notes) std::printf("  note: %s\n", n.c_str());
    std::printf("%s: %s -> %s\n", id.c_str(), to_string(r.verdict).c_str(), o.out_dir.c_str());
    switch (r.verdict) {
        case Verdict::pass: return kOk;
        case Verdict::inconclusive: return kInconclusive;
        case Verdict::fail: return kFail;
    }
    return kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterated Steiner symmetrization of planar compact sets"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    Common run_opts;
    auto* run = app.add_subcommand("run", "iterate symmetrals and write the trajectory with diagnostics");
    add_common(run, run_opts, true);
    run->add_option_function<std::string>("--mode", [&](const std::string& v) { run_opts.flags.mode = v; },
                                          "plain | rotated");

    Common verify_opts;
    std::string suite = "all";
    long n_cases = 1000;
    auto* verify = app.add_subcommand("verify", "property suites on seeded random sets");
    verify->add_option("SUITE", suite, "all | conservation | inequalities | oracle");
    verify->add_option("N_CASES", n_cases, "cases per property");
    verify->add_option_function<std::uint64_t>("SEED", [&](std::uint64_t v) { verify_opts.flags.seed = v; },
                                               "random seed");
    add_common(verify, verify_opts, false);

    Common repro_opts;
    std::string id;
    auto* repro = app.add_subcommand("reproduce", "run one of the reference experiments");
    repro->add_option("ID", id, "ex2.1 | ex2.2 | ex2.3 | thm2.1 | thm5.1 | sec5-ud | thm6.1")->required();
    add_common(repro, repro_opts, true);
    repro->add_option_function<double>("--tol", [&](double v) { repro_opts.flags.tol = v; },
                                       "relative slack on certificate inequalities");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*run) return cmd_run(run_opts);
        if (*verify) return cmd_verify(verify_opts, suite, n_cases);
        return cmd_reproduce(repro_opts, id);
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInputError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInputError;
    }
}
