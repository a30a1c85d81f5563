#include "bcdcp/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <thread>

#include "bcdcp/copula.hpp"
#include "bcdcp/errors.hpp"
#include "bcdcp/numerics.hpp"

namespace bcdcp::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Self-excited waiting time of the inverse-decay clock construction:
//   d = 1 + delta ln U / (lambda - a); S1 = -ln d / delta when d > 0,
//   S2 = Exp(a) for the level component (absent when a = 0).
template <class Log1p>
inline double self_wait(double lambda, double a, double delta, Rng& rng, Log1p&& lp) {
    double excess = lambda - a;
    double s1 = kInf;
    if (excess > 0.0) {
        double e = -std::log(rng.u01());
        double x = delta * e / excess;  // d = 1 - x
        if (x < 1.0) s1 = -lp(x) / delta;
    }
    if (a > 0.0) {
        double s2 = -std::log(rng.u01()) / a;
        return std::min(s1, s2);
    }
    return s1;
}

// Exact math policy: recorded paths use the same decay arithmetic as
// model::decay, so snapshots reproduce it bit for bit.
struct ExactMath {
    static double exp_neg(double x) { return std::exp(-x); }
    static double log1p_neg(double x) { return std::log1p(-x); }
};

// Fast policy for the Monte Carlo kernel: polynomial branches for the small
// arguments that dominate the event loop (|rel err| < 3e-9), std fallbacks
// beyond. Simulation output is statistically indistinguishable; bit-level
// reproducibility still holds because the polynomials are deterministic.
struct FastMath {
    static double exp_neg(double x) {
        if (x < 0.35) {
            return 1.0 -
                   x * (1.0 - x * (1.0 / 2 - x * (1.0 / 6 - x * (1.0 / 24 -
                         x * (1.0 / 120 - x * (1.0 / 720 - x * (1.0 / 5040 - x / 40320)))))));
        }
        return std::exp(-x);
    }
    static double log1p_neg(double x) {
        if (x <= 0.09) {
            return -x * (1.0 + x * (1.0 / 2 + x * (1.0 / 3 + x * (1.0 / 4 + x * (1.0 / 5 +
                          x * (1.0 / 6 + x * (1.0 / 7 + x / 8)))))));
        }
        return std::log1p(-x);
    }
};

struct CompiledShocks {
    bool present = false;
    bool bivariate = false;
    double rho = 0.0;
    CopulaSpec copula;
    Law marg1 = ExponentialLaw{1.0};
    Law marg2 = ExponentialLaw{1.0};
    bool exp1 = false, exp2 = false;
    double rate1 = 0.0, rate2 = 0.0;
    bool fgm = false;

    std::pair<double, double> draw(Rng& rng) const {
        if (!bivariate) {
            double x1 = exp1 ? -std::log(rng.u01()) / rate1 : bcdcp::sample(marg1, rng);
            return {x1, 0.0};
        }
        if (fgm) {
            double u1 = rng.u01();
            double aa = copula.theta * (1.0 - 2.0 * u1);
            double w = rng.u01();
            double u2;
            if (std::abs(aa) < 1e-12) {
                u2 = w;
            } else {
                double b = 1.0 + aa;
                u2 = (b - std::sqrt(std::max(b * b - 4.0 * aa * w, 0.0))) / (2.0 * aa);
            }
            double x1 = exp1 ? -std::log1p(-u1) / rate1 : bcdcp::quantile(marg1, u1);
            double x2 = exp2 ? -std::log1p(-u2) / rate2 : bcdcp::quantile(marg2, u2);
            return {x1, x2};
        }
        return sample_joint_shock(copula, marg1, marg2, rng);
    }
};

CompiledShocks compile_shocks(const BcdcpModel& model) {
    CompiledShocks s;
    s.rho = model.shocks.rho;
    s.present = s.rho > 0.0;
    s.bivariate = model.bivariate();
    if (!s.present) return s;
    s.marg1 = model.shocks.marg1;
    s.exp1 = std::holds_alternative<ExponentialLaw>(s.marg1);
    if (s.exp1) s.rate1 = std::get<ExponentialLaw>(s.marg1).rate;
    if (s.bivariate) {
        if (!model.shocks.marg2)
            throw DomainError("simulate: second shock marginal required for a bivariate model");
        s.marg2 = *model.shocks.marg2;
        s.exp2 = std::holds_alternative<ExponentialLaw>(s.marg2);
        if (s.exp2) s.rate2 = std::get<ExponentialLaw>(s.marg2).rate;
        s.copula = model.shocks.copula.value_or(CopulaSpec{});
        s.fgm = s.copula.family == CopulaFamily::Fgm;
    }
    return s;
}

struct CompiledLine {
    bool present = false;
    bool self_enabled = false;
    double a = 0.0, delta = 0.0, lambda0 = 0.0;
    CompiledSampler mark;
    CompiledSampler severity;
};

CompiledLine compile_line(const LineParams* line) {
    CompiledLine c;
    if (!line) return c;
    c.present = true;
    c.a = line->a;
    c.delta = line->delta;
    c.lambda0 = line->lambda0;
    c.self_enabled = line->self_jump.has_value();
    if (c.self_enabled) {
        c.mark = CompiledSampler(*line->self_jump);
        c.severity = CompiledSampler(line->severity.value_or(Law(ZeroLaw{})));
    }
    return c;
}

}  // namespace

const char* kind_name(EventKind k) {
    switch (k) {
        case EventKind::ExternalJoint: return "ExternalJoint";
        case EventKind::SelfLine1: return "SelfLine1";
        case EventKind::SelfLine2: return "SelfLine2";
    }
    return "?";
}

namespace {

std::optional<Event> next_event_compiled(SimState& state, const BcdcpModel& model,
                                         const CompiledLine& l1, const CompiledLine& l2,
                                         const CompiledShocks& shocks, Rng& rng) {
    // Clocks redrawn from scratch at every event (memoryless).
    double we = shocks.present ? -std::log(rng.u01()) / shocks.rho : kInf;
    double w1 = l1.self_enabled
                    ? self_wait(state.lambda1, l1.a, l1.delta, rng, ExactMath::log1p_neg)
                    : kInf;
    double w2 = (l2.present && l2.self_enabled)
                    ? self_wait(state.lambda2, l2.a, l2.delta, rng, ExactMath::log1p_neg)
                    : kInf;

    double w = std::min({we, w1, w2});
    if (!std::isfinite(w)) return std::nullopt;  // extinct: no clock can fire

    Event ev;
    ev.time = state.t + w;
    state.lambda1 = decay(model.line1, state.lambda1, w);
    if (l2.present) state.lambda2 = decay(*model.line2, state.lambda2, w);
    if (w1 <= w2 && w1 <= we) {
        ev.kind = EventKind::SelfLine1;
        double y = l1.mark(rng);
        double xi = l1.severity(rng);
        ev.mark1 = y;
        ev.severity1 = xi;
        state.lambda1 += y;
        state.n1 += 1;
        state.l1 += xi;
    } else if (w2 <= we) {
        ev.kind = EventKind::SelfLine2;
        double z = l2.mark(rng);
        double xi = l2.severity(rng);
        ev.mark2 = z;
        ev.severity2 = xi;
        state.lambda2 += z;
        state.n2 += 1;
        state.l2 += xi;
    } else {
        ev.kind = EventKind::ExternalJoint;
        auto [x1, x2] = shocks.draw(rng);
        ev.mark1 = x1;
        state.lambda1 += x1;
        if (l2.present) {
            ev.mark2 = x2;
            state.lambda2 += x2;
        }
    }
    state.t = ev.time;
    return ev;
}

}  // namespace

std::optional<Event> next_event(SimState& state, const BcdcpModel& model, Rng& rng) {
    CompiledLine l1 = compile_line(&model.line1);
    CompiledLine l2 = compile_line(model.line2 ? &*model.line2 : nullptr);
    CompiledShocks shocks = compile_shocks(model);
    return next_event_compiled(state, model, l1, l2, shocks, rng);
}

Path simulate_path(const BcdcpModel& model, double horizon, Rng rng, RecordMode mode,
                   double grid_dt, std::uint64_t seed_label) {
    if (!(horizon > 0.0)) throw DomainError("simulate_path: horizon must be > 0");
    Path path;
    path.horizon = horizon;
    path.seed = seed_label;

    CompiledLine cl1 = compile_line(&model.line1);
    CompiledLine cl2 = compile_line(model.line2 ? &*model.line2 : nullptr);
    CompiledShocks cshocks = compile_shocks(model);

    SimState st;
    st.lambda1 = model.line1.lambda0;
    st.lambda2 = model.line2 ? model.line2->lambda0 : 0.0;

    auto snapshot = [&](double at, const SimState& s) {
        StateSnapshot snap;
        snap.lambda1 = decay(model.line1, s.lambda1, at - s.t);
        snap.lambda2 = model.line2 ? decay(*model.line2, s.lambda2, at - s.t) : 0.0;
        snap.n1 = s.n1;
        snap.n2 = s.n2;
        snap.l1 = s.l1;
        snap.l2 = s.l2;
        return snap;
    };

    double next_grid = (mode == RecordMode::Full && grid_dt > 0.0) ? grid_dt : kInf;
    for (;;) {
        SimState before = st;
        std::optional<Event> ev = next_event_compiled(st, model, cl1, cl2, cshocks, rng);
        double stop_at = ev ? std::min(ev->time, horizon) : horizon;
        while (next_grid < stop_at) {
            path.grid.push_back({next_grid, snapshot(next_grid, before)});
            next_grid += grid_dt;
        }
        if (!ev) {
            path.extinct = true;
            path.terminal = snapshot(horizon, before);
            return path;
        }
        if (ev->time > horizon) {
            path.terminal = snapshot(horizon, before);
            return path;
        }
        if (mode == RecordMode::Full) {
            path.events.push_back(*ev);
            path.states.push_back(snapshot(ev->time, st));
        }
    }
}

double default_burn_in(const BcdcpModel& model) {
    double margin = stationarity_margin(model.line1);
    if (model.line2) margin = std::min(margin, stationarity_margin(*model.line2));
    if (!(margin > 0.0))
        throw DomainError(
            "burn-in: requires a stationary model (delta > mean of self-jump law on every line)");
    return 20.0 / margin;
}

namespace {

struct PathResult {
    double lambda1, lambda2, l1, l2;
};

// Fast kernel: residual clocks are carried across events that do not touch a
// line's intensity (exact by the restart property of the inverse-decay
// construction), and K paths run interleaved so their dependency chains
// overlap.
constexpr int kInterleave = 8;

struct LaneState {
    Rng rng;
    double lam1, lam2;   // post-jump intensities
    double tl1, tl2;     // times of those values
    double c1, c2, ce;   // absolute candidate event times
    double l1, l2;
    bool done;
};

template <class Math>
void run_block(const CompiledLine& l1c, const CompiledLine& l2c,
               const CompiledShocks& shocks, double burn, double t_end, std::uint64_t seed,
               std::int64_t first, std::int64_t count, PathResult* out) {
    const double a1 = l1c.a, d1 = l1c.delta;
    const double a2 = l2c.a, d2 = l2c.delta;
    const bool has2 = l2c.present;

    auto draw_clock = [](Rng& rng, double lam, double a, double delta, bool enabled) {
        if (!enabled) return kInf;
        double s1 = kInf;
        double excess = lam - a;
        if (excess > 0.0) {
            double e = -std::log(rng.u01());
            double x = delta * e / excess;
            if (x < 1.0) s1 = -Math::log1p_neg(x) / delta;
        }
        if (a > 0.0) s1 = std::min(s1, -std::log(rng.u01()) / a);
        return s1;
    };

    for (std::int64_t base = 0; base < count; base += kInterleave) {
        int kn = static_cast<int>(std::min<std::int64_t>(kInterleave, count - base));
        LaneState st[kInterleave];
        for (int k = 0; k < kn; ++k) {
            LaneState& s = st[k];
            s.rng = Rng::substream(seed, static_cast<std::uint64_t>(first + base + k));
            s.lam1 = l1c.lambda0;
            s.lam2 = has2 ? l2c.lambda0 : 0.0;
            s.tl1 = s.tl2 = 0.0;
            s.l1 = s.l2 = 0.0;
            s.done = false;
            s.ce = shocks.present ? -std::log(s.rng.u01()) / shocks.rho : kInf;
            s.c1 = draw_clock(s.rng, s.lam1, a1, d1, l1c.self_enabled);
            s.c2 = has2 ? draw_clock(s.rng, s.lam2, a2, d2, l2c.self_enabled) : kInf;
        }
        int alive = kn;
        while (alive > 0) {
            for (int k = 0; k < kn; ++k) {
                LaneState& s = st[k];
                if (s.done) continue;
                double tn;
                int kind;
                if (s.c1 <= s.c2 && s.c1 <= s.ce) {
                    tn = s.c1;
                    kind = 1;
                } else if (s.c2 <= s.ce) {
                    tn = s.c2;
                    kind = 2;
                } else {
                    tn = s.ce;
                    kind = 0;
                }
                if (!(tn <= t_end)) {
                    s.done = true;
                    --alive;
                    continue;
                }
                if (kind == 1) {
                    s.lam1 = a1 + (s.lam1 - a1) * Math::exp_neg(d1 * (tn - s.tl1));
                    s.tl1 = tn;
                    s.lam1 += l1c.mark(s.rng);
                    if (tn > burn) s.l1 += l1c.severity(s.rng);
                    s.c1 = tn + draw_clock(s.rng, s.lam1, a1, d1, true);
                } else if (kind == 2) {
                    s.lam2 = a2 + (s.lam2 - a2) * Math::exp_neg(d2 * (tn - s.tl2));
                    s.tl2 = tn;
                    s.lam2 += l2c.mark(s.rng);
                    if (tn > burn) s.l2 += l2c.severity(s.rng);
                    s.c2 = tn + draw_clock(s.rng, s.lam2, a2, d2, true);
                } else {
                    s.lam1 = a1 + (s.lam1 - a1) * Math::exp_neg(d1 * (tn - s.tl1));
                    s.tl1 = tn;
                    auto [x1, x2] = shocks.draw(s.rng);
                    s.lam1 += x1;
                    s.c1 = tn + draw_clock(s.rng, s.lam1, a1, d1, l1c.self_enabled);
                    if (has2) {
                        s.lam2 = a2 + (s.lam2 - a2) * Math::exp_neg(d2 * (tn - s.tl2));
                        s.tl2 = tn;
                        s.lam2 += x2;
                        s.c2 = tn + draw_clock(s.rng, s.lam2, a2, d2, l2c.self_enabled);
                    }
                    s.ce = tn - std::log(s.rng.u01()) / shocks.rho;
                }
            }
        }
        for (int k = 0; k < kn; ++k) {
            const LaneState& s = st[k];
            PathResult& r = out[base + k];
            r.lambda1 = a1 + (s.lam1 - a1) * Math::exp_neg(d1 * (t_end - s.tl1));
            r.lambda2 = has2 ? a2 + (s.lam2 - a2) * Math::exp_neg(d2 * (t_end - s.tl2)) : 0.0;
            r.l1 = s.l1;
            r.l2 = s.l2;
        }
    }
}

McEstimate make_estimate(const char* label, double value, double se, const McOptions& opt,
                         double burn) {
    return {label, value, se, opt.paths, opt.horizon, burn};
}

}  // namespace

std::vector<McEstimate> monte_carlo(const BcdcpModel& model, const McOptions& opt) {
    if (opt.paths < 2) throw DomainError("monte_carlo: needs at least 2 paths");
    if (!(opt.horizon > 0.0)) throw DomainError("monte_carlo: horizon must be > 0");
    double burn = opt.burn_in;
    if (burn < 0.0) burn = default_burn_in(model);
    if (burn > 0.0) {
        double margin = stationarity_margin(model.line1);
        if (model.line2) margin = std::min(margin, stationarity_margin(*model.line2));
        if (!(margin > 0.0))
            throw DomainError(
                "monte_carlo: burn-in presumes a stationary regime (delta > mean of self-jump "
                "law on every line)");
    }
    const double t_end = burn + opt.horizon;

    CompiledLine l1c = compile_line(&model.line1);
    CompiledLine l2c = compile_line(model.line2 ? &*model.line2 : nullptr);
    CompiledShocks shocks = compile_shocks(model);

    std::vector<PathResult> results(static_cast<size_t>(opt.paths));
    int threads = opt.threads > 0 ? opt.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = static_cast<int>(std::min<std::int64_t>(threads, opt.paths));

    if (threads == 1) {
        run_block<FastMath>(l1c, l2c, shocks, burn, t_end, opt.seed, 0, opt.paths,
                            results.data());
    } else {
        std::vector<std::thread> pool;
        std::int64_t chunk = (opt.paths + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::int64_t first = t * chunk;
            std::int64_t count = std::min<std::int64_t>(chunk, opt.paths - first);
            if (count <= 0) break;
            pool.emplace_back([&, first, count] {
                run_block<FastMath>(l1c, l2c, shocks, burn, t_end, opt.seed, first, count,
                                    results.data() + first);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Ordered compensated reduction: independent of the thread layout.
    const double n = static_cast<double>(opt.paths);
    enum {
        kLam1, kLam2, kL1, kL2, kLam1Sq, kLam2Sq, kLam12, kL1Sq, kL2Sq, kL1L2,
        kLam1L1, kLam2L2, kLam1L2, kLam2L1, kNum
    };
    num::CompensatedSum sums[kNum], sq[kNum];
    for (const PathResult& r : results) {
        double v[kNum] = {r.lambda1, r.lambda2, r.l1, r.l2,
                          r.lambda1 * r.lambda1, r.lambda2 * r.lambda2, r.lambda1 * r.lambda2,
                          r.l1 * r.l1, r.l2 * r.l2, r.l1 * r.l2,
                          r.lambda1 * r.l1, r.lambda2 * r.l2, r.lambda1 * r.l2, r.lambda2 * r.l1};
        for (int i = 0; i < kNum; ++i) {
            sums[i].add(v[i]);
            sq[i].add(v[i] * v[i]);
        }
    }
    double m[kNum], se[kNum];
    for (int i = 0; i < kNum; ++i) {
        m[i] = sums[i].value() / n;
        double var = std::max(0.0, sq[i].value() / n - m[i] * m[i]);
        se[i] = std::sqrt(var / n);
    }

    // second pass for the sampling errors of variance/covariance estimates
    double mL1 = m[kL1], mL2 = m[kL2];
    num::CompensatedSum dev4_1, dev4_2, devc2, dev2_1, dev2_2, devc;
    for (const PathResult& r : results) {
        double d1 = r.l1 - mL1, d2 = r.l2 - mL2;
        dev2_1.add(d1 * d1);
        dev2_2.add(d2 * d2);
        devc.add(d1 * d2);
        dev4_1.add(d1 * d1 * d1 * d1);
        dev4_2.add(d2 * d2 * d2 * d2);
        devc2.add(d1 * d2 * d1 * d2);
    }
    double varL1 = dev2_1.value() / (n - 1.0);
    double varL2 = dev2_2.value() / (n - 1.0);
    double covL = devc.value() / (n - 1.0);
    double se_var1 = std::sqrt(std::max(0.0, dev4_1.value() / n - varL1 * varL1) / n);
    double se_var2 = std::sqrt(std::max(0.0, dev4_2.value() / n - varL2 * varL2) / n);
    double se_cov = std::sqrt(std::max(0.0, devc2.value() / n - covL * covL) / n);
    double corr = (varL1 > 0 && varL2 > 0) ? covL / std::sqrt(varL1 * varL2) : 0.0;
    double se_corr = (n > 3) ? (1.0 - corr * corr) / std::sqrt(n - 3.0) : 0.0;

    std::vector<McEstimate> est;
    est.push_back(make_estimate("mean_lambda1", m[kLam1], se[kLam1], opt, burn));
    est.push_back(make_estimate("mean_lambda2", m[kLam2], se[kLam2], opt, burn));
    est.push_back(make_estimate("mean_L1", m[kL1], se[kL1], opt, burn));
    est.push_back(make_estimate("mean_L2", m[kL2], se[kL2], opt, burn));
    est.push_back(make_estimate("mean_lambda1_sq", m[kLam1Sq], se[kLam1Sq], opt, burn));
    est.push_back(make_estimate("mean_lambda2_sq", m[kLam2Sq], se[kLam2Sq], opt, burn));
    est.push_back(make_estimate("mean_lambda1_lambda2", m[kLam12], se[kLam12], opt, burn));
    est.push_back(make_estimate("mean_L1_sq", m[kL1Sq], se[kL1Sq], opt, burn));
    est.push_back(make_estimate("mean_L2_sq", m[kL2Sq], se[kL2Sq], opt, burn));
    est.push_back(make_estimate("mean_L1_L2", m[kL1L2], se[kL1L2], opt, burn));
    est.push_back(make_estimate("mean_lambda1_L1", m[kLam1L1], se[kLam1L1], opt, burn));
    est.push_back(make_estimate("mean_lambda2_L2", m[kLam2L2], se[kLam2L2], opt, burn));
    est.push_back(make_estimate("mean_lambda1_L2", m[kLam1L2], se[kLam1L2], opt, burn));
    est.push_back(make_estimate("mean_lambda2_L1", m[kLam2L1], se[kLam2L1], opt, burn));
    est.push_back(make_estimate("var_L1", varL1, se_var1, opt, burn));
    est.push_back(make_estimate("var_L2", varL2, se_var2, opt, burn));
    est.push_back(make_estimate("cov_L1_L2", covL, se_cov, opt, burn));
    est.push_back(make_estimate("corr_L1_L2", corr, se_corr, opt, burn));
    return est;
}

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void append_row(std::string& out, double t, const char* kind, const StateSnapshot& s) {
    append_double(out, t);
    out += ',';
    out += kind;
    out += ',';
    append_double(out, s.lambda1);
    out += ',';
    append_double(out, s.lambda2);
    out += ',';
    out += std::to_string(s.n1);
    out += ',';
    out += std::to_string(s.n2);
    out += ',';
    append_double(out, s.l1);
    out += ',';
    append_double(out, s.l2);
    out += '\n';
}

}  // namespace

std::string path_to_csv(const Path& path) {
    std::string out = "t,kind,lambda1,lambda2,N1,N2,L1,L2\n";
    size_t gi = 0;
    for (size_t i = 0; i < path.events.size(); ++i) {
        while (gi < path.grid.size() && path.grid[gi].t < path.events[i].time) {
            append_row(out, path.grid[gi].t, "grid", path.grid[gi].state);
            ++gi;
        }
        append_row(out, path.events[i].time, kind_name(path.events[i].kind), path.states[i]);
    }
    while (gi < path.grid.size()) {
        append_row(out, path.grid[gi].t, "grid", path.grid[gi].state);
        ++gi;
    }
    append_row(out, path.horizon, "terminal", path.terminal);
    return out;
}

}  // namespace bcdcp::sim
