#include "steinerlab/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace steinerlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based uniform draw in [0, 1) keyed by (seed, m).
double keyed_uniform(std::uint64_t seed, long m) {
    const std::uint64_t x = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(m)));
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

double powerlaw_increment(const PowerLaw& p, long m) {
    return p.theta * std::pow(static_cast<double>(m + p.offset), -p.sigma);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SpecError(what + ": not a number: '" + s + "'");
    }
}

long long parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SpecError(what + ": not an integer: '" + s + "'");
    }
}

std::uint64_t parse_seed(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size() || s.find('-') != std::string::npos) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SpecError(what + ": not a nonnegative integer: '" + s + "'");
    }
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join_angles(const std::vector<Direction>& ds) {
    std::string out;
    for (std::size_t i = 0; i < ds.size(); ++i) out += (i ? "," : "") + fmt(ds[i].theta());
    return out;
}

}  // namespace

void check_spec(const DirectionSpec& spec) {
    std::visit(overloaded{
                   [](const Kronecker& k) {
                       if (!std::isfinite(k.alpha)) throw SpecError("kronecker: alpha must be finite");
                   },
                   [](const PowerLaw& p) {
                       if (!(p.theta > 0.0) || !std::isfinite(p.theta)) throw SpecError("powerlaw: theta must be positive");
                       if (!(p.sigma > 0.5 && p.sigma < 1.0)) {
                           throw SpecError("powerlaw: sigma must lie in (1/2, 1) so that sum alpha diverges and sum alpha^2 converges");
                       }
                       if (p.offset < 0) throw SpecError("powerlaw: offset must be nonnegative");
                       if (powerlaw_increment(p, 1) >= kPi / 2) {
                           throw SpecError("powerlaw: first increment theta*(1+offset)^-sigma must be below pi/2");
                       }
                   },
                   [](const FiniteSet& f) {
                       if (f.directions.empty()) throw SpecError("finite: direction set is empty");
                       if (f.schedule == Schedule::indices) {
                           if (f.indices.empty()) throw SpecError("finite: index schedule is empty");
                           for (int i : f.indices) {
                               if (i < 0 || static_cast<std::size_t>(i) >= f.directions.size()) {
                                   throw SpecError("finite: schedule index " + std::to_string(i) + " out of range");
                               }
                           }
                       }
                   },
                   [](const IID&) {},
                   [](const Explicit& e) {
                       if (e.directions.empty()) throw SpecError("explicit: direction list is empty");
                   },
               },
               spec);
}

Direction direction(const DirectionSpec& spec, long m) {
    if (m < 1) throw SpecError("direction index must be >= 1");
    return std::visit(overloaded{
                          [&](const Kronecker& k) { return Direction(std::fmod(static_cast<double>(m) * k.alpha, kTwoPi)); },
                          [&](const PowerLaw& p) {
                              double beta = 0.0;
                              for (long k = 1; k <= m; ++k) beta += powerlaw_increment(p, k);
                              return Direction(beta);
                          },
                          [&](const FiniteSet& f) {
                              const std::size_t n = f.directions.size();
                              const auto k = static_cast<std::size_t>(m - 1);
                              switch (f.schedule) {
                                  case Schedule::round_robin:
                                      return f.directions[k % n];
                                  case Schedule::indices:
                                      return f.directions[static_cast<std::size_t>(f.indices[k % f.indices.size()])];
                                  case Schedule::seeded_random:
                                  default:
                                      return f.directions[static_cast<std::size_t>(keyed_uniform(f.seed, m) * static_cast<double>(n))];
                              }
                          },
                          [&](const IID& r) { return Direction(kTwoPi * keyed_uniform(r.seed, m)); },
                          [&](const Explicit& e) {
                              if (static_cast<std::size_t>(m) > e.directions.size()) {
                                  throw SpecError("explicit: list has only " + std::to_string(e.directions.size()) +
                                                  " directions, step " + std::to_string(m) + " requested");
                              }
                              return e.directions[static_cast<std::size_t>(m - 1)];
                          },
                      },
                      spec);
}

std::vector<Direction> directions(const DirectionSpec& spec, long M) {
    check_spec(spec);
    std::vector<Direction> out;
    out.reserve(static_cast<std::size_t>(std::max(0L, M)));
    if (const auto* p = std::get_if<PowerLaw>(&spec)) {
        double beta = 0.0;
        for (long m = 1; m <= M; ++m) {
            beta += powerlaw_increment(*p, m);
            out.emplace_back(beta);
        }
        return out;
    }
    for (long m = 1; m <= M; ++m) out.push_back(direction(spec, m));
    return out;
}

double line_angle(Direction u, Direction v) {
    double d = std::fmod(std::abs(v.theta() - u.theta()), kPi);
    if (d > kPi / 2) d = kPi - d;
    return d;
}

AngleLedger ledger(const DirectionSpec& spec, long M) {
    check_spec(spec);
    AngleLedger L;
    L.alphas.reserve(static_cast<std::size_t>(M));
    const auto* pl = std::get_if<PowerLaw>(&spec);
    if (pl) {
        // Exact increments; differencing the normalized angles would round.
        for (long m = 1; m <= M; ++m) L.alphas.push_back(powerlaw_increment(*pl, m));
    } else {
        Direction prev(0.0);
        for (const Direction& d : directions(spec, M)) {
            L.alphas.push_back(line_angle(prev, d));
            prev = d;
        }
    }
    double beta = 0.0, gamma = 1.0;
    for (double a : L.alphas) {
        beta += a;
        gamma *= std::cos(a);
        L.sum_alpha_sq += a * a;
        L.betas.push_back(beta);
        L.gamma_partials.push_back(gamma);
    }
    L.gamma_target = gamma;
    if (pl && M >= 1) {
        // sum_{k > M} theta^2 (k + offset)^(-2 sigma) <= integral from M + offset.
        const double n = static_cast<double>(M + pl->offset);
        const double tail = pl->theta * pl->theta * std::pow(n, 1.0 - 2.0 * pl->sigma) / (2.0 * pl->sigma - 1.0);
        if (pl->sigma > 0.5) {
            const double c = std::cos(L.alphas.back());
            L.tail_alpha_sq = tail;
            L.gamma_tail_bound = gamma * (std::exp(tail / (2.0 * c * c)) - 1.0);
            // -log cos x = x^2 / 2 + O(x^4); midpoint integral for the tail sum.
            const double mid = pl->theta * pl->theta * std::pow(n + 0.5, 1.0 - 2.0 * pl->sigma) / (2.0 * pl->sigma - 1.0);
            L.gamma_target = gamma * std::exp(-0.5 * mid);
        }
    }
    return L;
}

bool square_summable(const DirectionSpec& spec) {
    return std::visit(overloaded{
                          [](const Kronecker&) { return false; },
                          [](const PowerLaw& p) { return p.sigma > 0.5; },
                          [](const FiniteSet& f) {
                              // only a constant line has square-summable increments
                              for (const auto& d : f.directions) {
                                  if (line_angle(d, f.directions.front()) > 0.0) return false;
                              }
                              return true;
                          },
                          [](const IID&) { return false; },
                          [](const Explicit&) { return true; },
                      },
                      spec);
}

double discrepancy_of_angles(std::vector<double> angles) {
    if (angles.empty()) throw SpecError("discrepancy needs N >= 1");
    for (double& a : angles) a = normalize_angle(a) / kTwoPi;
    std::sort(angles.begin(), angles.end());
    const double n = static_cast<double>(angles.size());
    double plus = -1.0, minus = -1.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        plus = std::max(plus, static_cast<double>(i + 1) / n - angles[i]);
        minus = std::max(minus, angles[i] - static_cast<double>(i) / n);
    }
    return std::min(1.0, plus + minus);
}

double discrepancy(const DirectionSpec& spec, long N) {
    if (N < 1) throw SpecError("discrepancy needs N >= 1");
    std::vector<double> th;
    for (const auto& d : directions(spec, N)) th.push_back(d.theta());
    return discrepancy_of_angles(std::move(th));
}

double discrepancy_brute_force(const std::vector<double>& angles) {
    if (angles.empty()) throw SpecError("discrepancy needs N >= 1");
    std::vector<double> x;
    for (double a : angles) x.push_back(normalize_angle(a) / kTwoPi);
    const double n = static_cast<double>(x.size());
    double best = 0.0;
    for (double lo : x) {
        for (double hi : x) {
            // counterclockwise arc from lo to hi
            const bool wraps = hi < lo;
            const double len = wraps ? 1.0 - lo + hi : hi - lo;
            auto inside = [&](double p) { return wraps ? (p >= lo || p <= hi) : (p >= lo && p <= hi); };
            std::size_t closed = 0, open = 0;
            for (double p : x) {
                if (inside(p)) ++closed;
                if (len == 0.0 ? p != lo : inside(p) && p != lo && p != hi) ++open;
            }
            best = std::max(best, static_cast<double>(closed) / n - len);
            // the open arc from a point to itself is the circle minus that point
            best = std::max(best, (len == 0.0 ? 1.0 : len) - static_cast<double>(open) / n);
        }
    }
    return best;
}

DirectionSpec spec_from_keys(const std::map<std::string, std::string>& kv) {
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        auto it = kv.find(k);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    auto need = [&](const std::string& k) {
        auto v = get(k);
        if (!v) throw SpecError("spec: missing key '" + k + "'");
        return *v;
    };
    const std::string kind = need("kind");
    DirectionSpec spec;
    if (kind == "kronecker") {
        spec = Kronecker{parse_double(need("alpha"), "spec.alpha")};
    } else if (kind == "powerlaw") {
        PowerLaw p;
        p.theta = parse_double(need("theta"), "spec.theta");
        p.sigma = parse_double(need("sigma"), "spec.sigma");
        if (auto o = get("offset")) p.offset = static_cast<int>(parse_int(*o, "spec.offset"));
        spec = p;
    } else if (kind == "iid") {
        spec = IID{parse_seed(need("seed"), "spec.seed")};
    } else if (kind == "finite" || kind == "explicit") {
        std::vector<Direction> ds;
        FiniteSet f;
        if (auto path = get("path")) {
            if (kind == "finite") {
                f = load_finite_file(*path);
            } else {
                ds = load_angle_file(*path);
            }
        }
        if (auto angles = get("angles")) {
            auto& target = kind == "finite" ? f.directions : ds;
            target.clear();
            for (const auto& a : split(*angles, ',')) target.emplace_back(parse_double(a, "spec.angles"));
        }
        if (kind == "explicit") {
            spec = Explicit{ds};
        } else {
            if (auto sch = get("schedule")) {
                if (*sch == "round_robin") {
                    f.schedule = Schedule::round_robin;
                } else if (*sch == "random") {
                    f.schedule = Schedule::seeded_random;
                } else if (*sch == "indices") {
                    f.schedule = Schedule::indices;
                } else {
                    throw SpecError("spec.schedule: expected round_robin, random or indices, got '" + *sch + "'");
                }
            }
            if (auto s = get("seed")) f.seed = parse_seed(*s, "spec.seed");
            if (auto idx = get("indices")) {
                f.indices.clear();
                for (const auto& i : split(*idx, ',')) f.indices.push_back(static_cast<int>(parse_int(i, "spec.indices")));
            }
            spec = f;
        }
    } else {
        throw SpecError("spec.kind: unknown kind '" + kind + "' (expected kronecker, powerlaw, finite, iid, explicit)");
    }
    check_spec(spec);
    return spec;
}

std::map<std::string, std::string> spec_to_keys(const DirectionSpec& spec) {
    return std::visit(overloaded{
                          [](const Kronecker& k) {
                              return std::map<std::string, std::string>{{"kind", "kronecker"}, {"alpha", fmt(k.alpha)}};
                          },
                          [](const PowerLaw& p) {
                              return std::map<std::string, std::string>{{"kind", "powerlaw"},
                                                                        {"theta", fmt(p.theta)},
                                                                        {"sigma", fmt(p.sigma)},
                                                                        {"offset", std::to_string(p.offset)}};
                          },
                          [](const FiniteSet& f) {
                              std::map<std::string, std::string> kv{{"kind", "finite"}, {"angles", join_angles(f.directions)}};
                              if (f.schedule == Schedule::round_robin) kv["schedule"] = "round_robin";
                              if (f.schedule == Schedule::seeded_random) {
                                  kv["schedule"] = "random";
                                  kv["seed"] = std::to_string(f.seed);
                              }
                              if (f.schedule == Schedule::indices) {
                                  kv["schedule"] = "indices";
                                  std::string s;
                                  for (std::size_t i = 0; i < f.indices.size(); ++i) s += (i ? "," : "") + std::to_string(f.indices[i]);
                                  kv["indices"] = s;
                              }
                              return kv;
                          },
                          [](const IID& r) {
                              return std::map<std::string, std::string>{{"kind", "iid"}, {"seed", std::to_string(r.seed)}};
                          },
                          [](const Explicit& e) {
                              return std::map<std::string, std::string>{{"kind", "explicit"}, {"angles", join_angles(e.directions)}};
                          },
                      },
                      spec);
}

std::string describe(const DirectionSpec& spec) {
    return std::visit(overloaded{
                          [](const Kronecker& k) { return "kronecker:" + fmt(k.alpha); },
                          [](const PowerLaw& p) {
                              std::string s = "powerlaw:" + fmt(p.theta) + "," + fmt(p.sigma);
                              if (p.offset) s += "," + std::to_string(p.offset);
                              return s;
                          },
                          [](const FiniteSet& f) { return "finite:" + std::to_string(f.directions.size()) + " directions"; },
                          [](const IID& r) { return "iid:" + std::to_string(r.seed); },
                          [](const Explicit& e) { return "explicit:" + std::to_string(e.directions.size()) + " directions"; },
                      },
                      spec);
}

DirectionSpec parse_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw SpecError("spec '" + text + "': expected KIND:ARGS (kronecker:ALPHA, powerlaw:THETA,SIGMA, finite:PATH, iid:SEED, explicit:PATH)");
    }
    const std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
    std::map<std::string, std::string> kv{{"kind", kind}};
    if (kind == "kronecker") {
        kv["alpha"] = arg;
    } else if (kind == "powerlaw") {
        const auto parts = split(arg, ',');
        if (parts.size() < 2 || parts.size() > 3) throw SpecError("powerlaw: expected THETA,SIGMA[,OFFSET]");
        kv["theta"] = parts[0];
        kv["sigma"] = parts[1];
        if (parts.size() == 3) kv["offset"] = parts[2];
    } else if (kind == "iid") {
        kv["seed"] = arg;
    } else if (kind == "finite" || kind == "explicit") {
        kv["path"] = arg;
    }
    return spec_from_keys(kv);
}

std::vector<Direction> load_angle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot read angle file '" + path + "'");
    std::vector<Direction> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        out.emplace_back(parse_double(line, path + ":" + std::to_string(lineno)));
    }
    if (out.empty()) throw SpecError("angle file '" + path + "' has no angles");
    return out;
}

FiniteSet load_finite_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot read direction set '" + path + "'");
    FiniteSet f;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        if (line.rfind("schedule", 0) == 0) {
            std::istringstream is(line.substr(8));
            std::string kind;
            is >> kind;
            if (kind == "round_robin") {
                f.schedule = Schedule::round_robin;
            } else if (kind == "random") {
                std::string seed;
                is >> seed;
                f.schedule = Schedule::seeded_random;
                f.seed = parse_seed(seed, where);
            } else if (kind == "indices") {
                f.schedule = Schedule::indices;
                std::string tok;
                while (is >> tok) f.indices.push_back(static_cast<int>(parse_int(tok, where)));
            } else {
                throw SpecError(where + ": unknown schedule '" + kind + "'");
            }
            continue;
        }
        f.directions.emplace_back(parse_double(line, where));
    }
    check_spec(f);
    return f;
}

}  // namespace steinerlab
