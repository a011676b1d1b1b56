#include "portion/rules.hpp"

#include <algorithm>
#include <cassert>

#include "portion/lp.hpp"

namespace portion::rules {

const char* rule_name(RuleId r) {
    switch (r) {
        case RuleId::Avg: return "avg";
        case RuleId::Max: return "max";
        case RuleId::Min: return "min";
        case RuleId::Med: return "med";
        case RuleId::Geo: return "geo";
        case RuleId::Util: return "util";
        case RuleId::Egal: return "egal";
        case RuleId::IM: return "im";
    }
    return "?";
}

std::optional<RuleId> rule_from_name(const std::string& name) {
    for (RuleId r : kAllRules)
        if (name == rule_name(r)) return r;
    return std::nullopt;
}

bool rule_is_exact(RuleId r) { return r != RuleId::Geo; }

// ---------------------------------------------------------------------------
// Phantom systems
// ---------------------------------------------------------------------------

PhantomSystem PhantomSystem::independent_markets(std::size_t n) {
    PhantomSystem ps;
    ps.n = n;
    ps.phantoms.reserve(n + 1);
    ps.phantoms.push_back(PiecewiseLinear::constant(Rational(0), Rational(0), Rational(1)));
    for (std::size_t k = 1; k <= n; ++k) {
        // min(k t, 1)
        if (k == 1) {
            ps.phantoms.push_back(PiecewiseLinear({{rat(0), rat(0)}, {rat(1), rat(1)}}));
        } else {
            ps.phantoms.push_back(PiecewiseLinear(
                {{rat(0), rat(0)}, {rat(1, static_cast<long>(k)), rat(1)}, {rat(1), rat(1)}}));
        }
    }
    ps.validate();
    return ps;
}

PhantomSystem PhantomSystem::utilitarian_ladder(std::size_t n) {
    PhantomSystem ps;
    ps.n = n;
    ps.phantoms.reserve(n + 1);
    const long q = static_cast<long>(n) + 1;
    for (std::size_t k = 0; k <= n; ++k) {
        // clamp((n+1) t - k, 0, 1)
        const long lk = static_cast<long>(k);
        std::vector<std::pair<Rational, Rational>> pts;
        if (k > 0) pts.emplace_back(rat(0), rat(0));
        pts.emplace_back(rat(lk, q), rat(0));
        pts.emplace_back(rat(lk + 1, q), rat(1));
        if (lk + 1 < q) pts.emplace_back(rat(1), rat(1));
        ps.phantoms.push_back(PiecewiseLinear(std::move(pts)));
    }
    ps.validate();
    return ps;
}

void PhantomSystem::validate() const {
    if (phantoms.size() != n + 1)
        throw Error(ErrorCode::InvalidArgument, "phantom system needs n+1 functions");
    for (const auto& f : phantoms) {
        if (!(f.domain_min() == 0) || !(f.domain_max() == 1))
            throw Error(ErrorCode::InvalidArgument, "phantom domain must be [0,1]");
        if (!f.is_nondecreasing())
            throw Error(ErrorCode::InvalidArgument, "phantoms must be nondecreasing");
        if (f.value(Rational(0)) != 0)
            throw Error(ErrorCode::InvalidArgument, "phantoms start at 0");
        Rational end = f.value(Rational(1));
        if (end != 1 && end != 0)  // the constant zero phantom is allowed
            throw Error(ErrorCode::InvalidArgument, "phantoms end at 1");
    }
}

// ---------------------------------------------------------------------------
// Median trajectory of a family of piecewise-linear functions.
//
// Between consecutive global breakpoints every function is a line, and the
// pointwise median changes identity only where some line crosses the current
// median line. The sweep walks those crossings and emits the median as a
// breakpoint list. Templated on the scalar so the hot rules can run on Rat64
// and fall back to Rational on overflow.
// ---------------------------------------------------------------------------

namespace {

template <typename R>
using Pts = std::vector<std::pair<R, R>>;

template <typename R>
R pwl_value(const Pts<R>& pts, const R& t) {
    auto it = std::lower_bound(pts.begin(), pts.end(), t,
                               [](const auto& p, const R& x) { return p.first < x; });
    if (it != pts.end() && it->first == t) return it->second;
    auto hi = it, lo = it - 1;
    R slope = (hi->second - lo->second) / (hi->first - lo->first);
    return lo->second + slope * (t - lo->first);
}

template <typename R>
Pts<R> median_trajectory(const std::vector<Pts<R>>& fns) {
    const std::size_t k = fns.size();
    assert(k % 2 == 1);
    const std::size_t mid = k / 2;

    std::vector<R> grid;
    for (const auto& f : fns)
        for (const auto& p : f) grid.push_back(p.first);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    Pts<R> out;
    auto emit = [&](const R& t, const R& v) {
        if (!out.empty() && out.back().first == t) {
            if (out.back().second != v)
                throw Error(ErrorCode::Internal, "median trajectory discontinuity");
            return;
        }
        out.emplace_back(t, v);
    };

    std::vector<R> val(k), slope(k);
    std::vector<std::size_t> order(k);
    for (std::size_t w = 0; w + 1 < grid.size(); ++w) {
        const R& a = grid[w];
        const R& b = grid[w + 1];
        R width = b - a;
        for (std::size_t i = 0; i < k; ++i) {
            val[i] = pwl_value(fns[i], a);
            slope[i] = (pwl_value(fns[i], b) - val[i]) / width;
        }
        R t = a;
        std::size_t guard = 0;
        for (;;) {
            for (std::size_t i = 0; i < k; ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                if (val[x] != val[y]) return val[x] < val[y];
                if (slope[x] != slope[y]) return slope[x] < slope[y];
                return x < y;
            });
            std::size_t led = order[mid];
            R best = b;
            bool found_inner = false;
            for (std::size_t i = 0; i < k; ++i) {
                if (i == led || slope[i] == slope[led]) continue;
                R dt = (val[i] - val[led]) / (slope[led] - slope[i]);
                if (dt > R(0)) {
                    R tc = t + dt;
                    if (tc < best) {
                        best = tc;
                        found_inner = true;
                    }
                }
            }
            emit(t, val[led]);
            if (!found_inner) {
                emit(b, val[led] + slope[led] * (b - t));
                break;
            }
            R step = best - t;
            for (std::size_t i = 0; i < k; ++i) val[i] = val[i] + slope[i] * step;
            t = best;
            if (++guard > k * k + 4)
                throw Error(ErrorCode::Internal, "median sweep did not terminate");
        }
    }
    return out;
}

template <typename R>
struct PhantomSolve {
    R t_star;
    std::vector<R> medians;
    Pts<R> sum;
};

template <typename R>
PhantomSolve<R> solve_phantom_system(const std::vector<Pts<R>>& phantoms,
                                     const std::vector<std::vector<R>>& columns) {
    const std::size_t m = columns.size();
    std::vector<Pts<R>> medians;
    medians.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<Pts<R>> fns = phantoms;
        for (const R& c : columns[j]) fns.push_back(Pts<R>{{R(0), c}, {R(1), c}});
        medians.push_back(median_trajectory(fns));
    }

    std::vector<R> ts;
    for (const auto& f : medians)
        for (const auto& p : f) ts.push_back(p.first);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    Pts<R> sum;
    sum.reserve(ts.size());
    for (const R& t : ts) {
        R s(0);
        for (const auto& f : medians) s = s + pwl_value(f, t);
        sum.emplace_back(t, s);
    }

    // smallest t with sum(t) = 1
    std::size_t idx = sum.size();
    for (std::size_t i = 0; i < sum.size(); ++i) {
        if (!(sum[i].second < R(1))) { idx = i; break; }
    }
    if (idx == sum.size())
        throw Error(ErrorCode::PhantomNoRoot, "phantom medians never reach total 1");
    if (idx == 0 && sum[0].second != R(1))
        throw Error(ErrorCode::PhantomNoRoot, "phantom median sum starts above 1");
    R t_star = sum[idx].first;
    if (idx > 0) {
        R lo = sum[idx - 1].first;
        R vlo = sum[idx - 1].second;
        R slope = (sum[idx].second - vlo) / (sum[idx].first - lo);
        // vlo < 1 here, so the segment climbs through 1
        t_star = lo + (R(1) - vlo) / slope;
    }

    PhantomSolve<R> res;
    res.t_star = t_star;
    res.medians.reserve(m);
    for (const auto& f : medians) res.medians.push_back(pwl_value(f, res.t_star));
    res.sum = std::move(sum);
    return res;
}

enum class PhantomKind { IndependentMarkets, UtilLadder };

// Specialized solver for the two shipped phantom families. Each phantom is 0
// up to rise_lo, climbs linearly to 1 at rise_hi, then stays at 1 (the
// constant-zero phantom has an empty rise interval pushed past t=1). Window
// boundaries are the rise endpoints; inside a window every value is a line,
// so the median sweep from median_trajectory applies with flat buffers.
struct PhantomScratch {
    std::vector<Rat64> bounds;                 // window boundaries
    std::vector<Rat64> ph_lo, ph_hi, ph_slope; // per phantom
    std::vector<Rat64> ph_val;                 // phantom values at window start
    std::vector<Rat64> val, slope;             // per entry (phantoms + scores)
    std::vector<std::uint32_t> order;
    std::vector<std::vector<std::pair<Rat64, Rat64>>> med;  // per candidate pieces
    std::vector<Rat64> ts;                     // merged piece boundaries
};

std::vector<Rat64> phantom_medians_fast(PhantomKind kind,
                                        const std::vector<std::vector<Rat64>>& columns) {
    static thread_local PhantomScratch ws;
    const std::size_t m = columns.size();
    const std::size_t n = columns.front().size();
    const std::size_t np = n + 1, k2 = 2 * n + 1, mid = n;
    const std::int64_t q = static_cast<std::int64_t>(n) + 1;

    ws.ph_lo.assign(np, Rat64(0));
    ws.ph_hi.assign(np, Rat64(0));
    ws.ph_slope.assign(np, Rat64(0));
    ws.bounds.clear();
    ws.bounds.push_back(Rat64(0));
    ws.bounds.push_back(Rat64(1));
    for (std::size_t k = 0; k < np; ++k) {
        if (kind == PhantomKind::IndependentMarkets) {
            if (k == 0) {
                ws.ph_lo[k] = Rat64(2);  // never rises
                ws.ph_hi[k] = Rat64(3);
            } else {
                ws.ph_lo[k] = Rat64(0);
                ws.ph_hi[k] = Rat64(1, static_cast<std::int64_t>(k));
            }
        } else {
            ws.ph_lo[k] = Rat64(static_cast<std::int64_t>(k), q);
            ws.ph_hi[k] = Rat64(static_cast<std::int64_t>(k) + 1, q);
        }
        if (ws.ph_hi[k] <= Rat64(1))
            ws.ph_slope[k] = Rat64(1) / (ws.ph_hi[k] - ws.ph_lo[k]);
        if (ws.ph_lo[k] > Rat64(0) && ws.ph_lo[k] < Rat64(1)) ws.bounds.push_back(ws.ph_lo[k]);
        if (ws.ph_hi[k] > Rat64(0) && ws.ph_hi[k] < Rat64(1)) ws.bounds.push_back(ws.ph_hi[k]);
    }
    std::sort(ws.bounds.begin(), ws.bounds.end());
    ws.bounds.erase(std::unique(ws.bounds.begin(), ws.bounds.end()), ws.bounds.end());

    ws.med.resize(m);
    for (std::size_t j = 0; j < m; ++j) ws.med[j].clear();
    ws.ph_val.assign(np, Rat64(0));
    ws.val.assign(k2, Rat64(0));
    ws.slope.assign(k2, Rat64(0));
    ws.order.assign(k2, 0);

    const auto& cols = columns;

    bool crossed = false;
    for (std::size_t w = 0; w + 1 < ws.bounds.size() && !crossed; ++w) {
        const Rat64 a = ws.bounds[w], b = ws.bounds[w + 1];
        for (std::size_t k = 0; k < np; ++k) {
            if (a >= ws.ph_hi[k]) ws.ph_val[k] = Rat64(1);
            else if (a <= ws.ph_lo[k]) ws.ph_val[k] = Rat64(0);
            else ws.ph_val[k] = (a - ws.ph_lo[k]) * ws.ph_slope[k];
        }
        Rat64 end_sum(0);
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t k = 0; k < np; ++k) {
                ws.val[k] = ws.ph_val[k];
                bool rising = a >= ws.ph_lo[k] && b <= ws.ph_hi[k];
                ws.slope[k] = rising ? ws.ph_slope[k] : Rat64(0);
            }
            for (std::size_t i = 0; i < n; ++i) {
                ws.val[np + i] = cols[j][i];
                ws.slope[np + i] = Rat64(0);
            }
            Rat64 t = a;
            std::size_t guard = 0;
            for (;;) {
                for (std::size_t i = 0; i < k2; ++i) ws.order[i] = static_cast<std::uint32_t>(i);
                std::nth_element(ws.order.begin(), ws.order.begin() + mid, ws.order.end(),
                                 [&](std::uint32_t x, std::uint32_t y) {
                                     if (ws.val[x] != ws.val[y]) return ws.val[x] < ws.val[y];
                                     if (ws.slope[x] != ws.slope[y]) return ws.slope[x] < ws.slope[y];
                                     return x < y;
                                 });
                std::uint32_t led = ws.order[mid];
                Rat64 best = b;
                bool inner = false;
                for (std::size_t i = 0; i < k2; ++i) {
                    if (i == led || ws.slope[i] == ws.slope[led]) continue;
                    Rat64 dt = (ws.val[i] - ws.val[led]) / (ws.slope[led] - ws.slope[i]);
                    if (dt > Rat64(0)) {
                        Rat64 tc = t + dt;
                        if (tc < best) {
                            best = tc;
                            inner = true;
                        }
                    }
                }
                auto& pieces = ws.med[j];
                if (pieces.empty() || pieces.back().first != t)
                    pieces.emplace_back(t, ws.val[led]);
                if (!inner) {
                    Rat64 vb = ws.val[led] + ws.slope[led] * (b - t);
                    pieces.emplace_back(b, vb);
                    end_sum = end_sum + vb;
                    break;
                }
                Rat64 step = best - t;
                for (std::size_t i = 0; i < k2; ++i)
                    ws.val[i] = ws.val[i] + ws.slope[i] * step;
                t = best;
                if (++guard > k2 * k2 + 4)
                    throw Error(ErrorCode::Internal, "median sweep did not terminate");
            }
        }
        if (end_sum >= Rat64(1)) crossed = true;
    }
    if (!crossed) throw Error(ErrorCode::PhantomNoRoot, "phantom medians never reach total 1");

    // merge piece boundaries, locate the first point where the sum reaches 1
    ws.ts.clear();
    for (std::size_t j = 0; j < m; ++j)
        for (const auto& p : ws.med[j]) ws.ts.push_back(p.first);
    std::sort(ws.ts.begin(), ws.ts.end());
    ws.ts.erase(std::unique(ws.ts.begin(), ws.ts.end()), ws.ts.end());

    auto value_at = [&](const std::vector<std::pair<Rat64, Rat64>>& pts, const Rat64& t) {
        auto it = std::lower_bound(pts.begin(), pts.end(), t,
                                   [](const auto& p, const Rat64& x) { return p.first < x; });
        if (it != pts.end() && it->first == t) return it->second;
        auto hi = it, lo = it - 1;
        Rat64 sl = (hi->second - lo->second) / (hi->first - lo->first);
        return lo->second + sl * (t - lo->first);
    };
    auto sum_at = [&](const Rat64& t) {
        Rat64 s(0);
        for (std::size_t j = 0; j < m; ++j) s = s + value_at(ws.med[j], t);
        return s;
    };

    std::size_t idx = ws.ts.size();
    Rat64 prev_sum(0);
    Rat64 cur(0);
    for (std::size_t i = 0; i < ws.ts.size(); ++i) {
        cur = sum_at(ws.ts[i]);
        if (!(cur < Rat64(1))) { idx = i; break; }
        prev_sum = cur;
    }
    if (idx == ws.ts.size())
        throw Error(ErrorCode::PhantomNoRoot, "phantom medians never reach total 1");
    Rat64 t_star = ws.ts[idx];
    if (idx > 0) {
        Rat64 lo = ws.ts[idx - 1];
        Rat64 sl = (cur - prev_sum) / (t_star - lo);
        t_star = lo + (Rat64(1) - prev_sum) / sl;
    } else if (cur != Rat64(1)) {
        throw Error(ErrorCode::PhantomNoRoot, "phantom median sum starts above 1");
    }

    std::vector<Rat64> x;
    x.reserve(m);
    for (std::size_t j = 0; j < m; ++j) x.push_back(value_at(ws.med[j], t_star));
    return x;
}

Outcome eval_phantom_rule(PhantomKind kind, const Instance& inst) {
    try {
        const std::size_t n = inst.n(), m = inst.m();
        std::vector<std::vector<Rat64>> cols(m);
        for (std::size_t j = 0; j < m; ++j) {
            cols[j].reserve(n);
            for (std::size_t i = 0; i < n; ++i) cols[j].push_back(Rat64::from(inst.score(i, j)));
        }
        std::vector<Rat64> meds = phantom_medians_fast(kind, cols);
        std::vector<Rational> x;
        x.reserve(m);
        for (const auto& v : meds) x.push_back(v.to_rational());
        return Outcome::exact(std::move(x));
    } catch (const SmallRatOverflow&) {
        PhantomSystem ps = kind == PhantomKind::IndependentMarkets
                               ? PhantomSystem::independent_markets(inst.n())
                               : PhantomSystem::utilitarian_ladder(inst.n());
        return moving_phantoms(ps, inst).outcome;
    }
}

}  // namespace

MovingPhantomResult moving_phantoms(const PhantomSystem& ps, const Instance& inst) {
    if (ps.n != inst.n())
        throw Error(ErrorCode::DimensionMismatch, "phantom system sized for a different n");
    const std::size_t m = inst.m();
    std::vector<Pts<Rational>> phantoms;
    phantoms.reserve(ps.phantoms.size());
    for (const auto& f : ps.phantoms)
        phantoms.emplace_back(f.breakpoints().begin(), f.breakpoints().end());
    std::vector<std::vector<Rational>> cols(m);
    for (std::size_t j = 0; j < m; ++j) cols[j] = inst.column(j);

    PhantomSolve<Rational> res = solve_phantom_system(phantoms, cols);
    return MovingPhantomResult{res.t_star, Outcome::exact(res.medians),
                               PiecewiseLinear(std::move(res.sum))};
}

// ---------------------------------------------------------------------------
// Coordinate-wise rules
// ---------------------------------------------------------------------------

Outcome coordinatewise(Aggregator f, const Instance& inst) {
    const std::size_t m = inst.m();
    std::vector<Rational> agg(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<Rational> col = inst.column(j);
        switch (f) {
            case Aggregator::Avg: {
                Rational s = 0;
                for (const auto& v : col) s += v;
                agg[j] = s / Rational(static_cast<long>(col.size()));
                break;
            }
            case Aggregator::Max:
                agg[j] = *std::max_element(col.begin(), col.end());
                break;
            case Aggregator::Min:
                agg[j] = *std::min_element(col.begin(), col.end());
                break;
            case Aggregator::Med:
                agg[j] = median(std::move(col));
                break;
            case Aggregator::Geo:
                throw Error(ErrorCode::InvalidArgument, "geometric mean goes through geo()");
        }
    }
    Rational total = 0;
    for (const auto& v : agg) total += v;
    if (sgn(total) == 0) {
        Rational u(1, static_cast<long>(m));
        u.canonicalize();
        return Outcome::exact(std::vector<Rational>(m, u));
    }
    for (auto& v : agg) v /= total;
    return Outcome::exact(std::move(agg));
}

Outcome geo(const Instance& inst) {
    const std::size_t m = inst.m(), n = inst.n();
    std::vector<BigFloat> agg(m);
    bool all_zero = true;
    for (std::size_t j = 0; j < m; ++j) {
        Rational prod = 1;
        bool zero = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (sgn(inst.score(i, j)) == 0) { zero = true; break; }
            prod *= inst.score(i, j);
        }
        if (zero) {
            agg[j] = BigFloat(0L);
        } else {
            agg[j] = nth_root(prod, static_cast<unsigned>(n));
            all_zero = false;
        }
    }
    if (all_zero) {
        Rational u(1, static_cast<long>(m));
        u.canonicalize();
        return Outcome::approximate(std::vector<BigFloat>(m, BigFloat(u)));
    }
    BigFloat total;
    for (const auto& v : agg) total = total + v;
    for (auto& v : agg) v = v / total;
    return Outcome::approximate(std::move(agg));
}

Outcome evaluate(RuleId rule, const Instance& inst) {
    if (inst.n() == 1) return Outcome::exact(inst.row(0).entries());
    switch (rule) {
        case RuleId::Avg: return coordinatewise(Aggregator::Avg, inst);
        case RuleId::Max: return coordinatewise(Aggregator::Max, inst);
        case RuleId::Min: return coordinatewise(Aggregator::Min, inst);
        case RuleId::Med: return coordinatewise(Aggregator::Med, inst);
        case RuleId::Geo: return geo(inst);
        case RuleId::Util: return eval_phantom_rule(PhantomKind::UtilLadder, inst);
        case RuleId::Egal: return lp::egal_leximin(inst);
        case RuleId::IM: return eval_phantom_rule(PhantomKind::IndependentMarkets, inst);
    }
    throw Error(ErrorCode::Internal, "unknown rule");
}

namespace detail {

std::vector<Rat64> phantom_medians_im(const std::vector<std::vector<Rat64>>& columns) {
    return phantom_medians_fast(PhantomKind::IndependentMarkets, columns);
}

std::vector<Rat64> phantom_medians_ladder(const std::vector<std::vector<Rat64>>& columns) {
    return phantom_medians_fast(PhantomKind::UtilLadder, columns);
}

}  // namespace detail

}  // namespace portion::rules
