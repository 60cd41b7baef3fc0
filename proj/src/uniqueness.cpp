#include "potentia/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace potentia {

Point ZeroGenerator::at(long k) const {
    double r = 0;
    switch (kind) {
        case Kind::Explicit:
            throw Error("explicit zero sets are not generated by index");
        case Kind::OneOverK:
            r = 1.0 - 1.0 / static_cast<double>(k);
            break;
        case Kind::OneOverKSq:
            r = 1.0 - 1.0 / (static_cast<double>(k) * k);
            break;
        case Kind::Geometric:
            r = 1.0 - coeff * std::pow(ratio, static_cast<double>(k));
            break;
        case Kind::Power:
            r = 1.0 - coeff * std::pow(static_cast<double>(k), -exponent);
            break;
    }
    r *= scale;
    return {center.x + r * std::cos(angle), center.y + r * std::sin(angle)};
}

namespace {

void check_zero_location(const TestFunction& v, Point z, double geometry_tol) {
    if (!v.domain.contains(z)) {
        throw HypothesisError("zero-set hypothesis violated: point outside D");
    }
    if (v.hole.signed_distance(z) < -geometry_tol) {
        throw HypothesisError("zero-set hypothesis violated: point inside K");
    }
}

struct BlockFit {
    double slope = 0;
    int blocks = 0;
};

BlockFit fit_block_slope(const std::vector<std::pair<long, double>>& checkpoints) {
    // Dyadic block sums B_j = S_{N_{j+1}} - S_{N_j}; regression of log B_j on j.
    std::vector<double> xs, ys;
    for (size_t i = 0; i + 1 < checkpoints.size(); ++i) {
        const double block = checkpoints[i + 1].second - checkpoints[i].second;
        if (block > 0) {
            xs.push_back(static_cast<double>(xs.size()));
            ys.push_back(std::log(block));
        }
    }
    const size_t keep = 8;
    if (xs.size() > keep) {
        xs.erase(xs.begin(), xs.end() - keep);
        ys.erase(ys.begin(), ys.end() - keep);
    }
    BlockFit fit;
    fit.blocks = static_cast<int>(xs.size());
    if (xs.size() < 2) return fit;
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

}  // namespace

DivergenceReport divergence_sum(const TestFunction& v, const ZeroGenerator& zeros,
                                const DivergenceOptions& opt) {
    DivergenceReport rep;
    if (zeros.finite()) {
        double s = 0;
        for (const auto& e : zeros.entries) {
            check_zero_location(v, e.p, opt.geometry_tol);
            s += e.multiplicity * v.value(e.p);
            ++rep.terms;
        }
        rep.classification = DivergenceClass::Convergent;
        rep.value = s;
        rep.last_partial_sum = s;
        rep.partial_sums.emplace_back(rep.terms, s);
        rep.method = "finite-sum";
        return rep;
    }

    double s = 0;
    long next_checkpoint = 16;
    bool threshold_hit = false;
    long k = zeros.k_start;
    for (long count = 1; count <= opt.max_terms; ++count, ++k) {
        const Point z = zeros.at(k);
        check_zero_location(v, z, opt.geometry_tol);
        const double term = v.value(z);
        s += term;
        rep.terms = count;
        if (count == next_checkpoint || count == opt.max_terms) {
            rep.partial_sums.emplace_back(count, s);
            next_checkpoint *= 2;
        }
        if (s > opt.sum_threshold) {
            threshold_hit = true;
            if (rep.partial_sums.empty() || rep.partial_sums.back().first != count) {
                rep.partial_sums.emplace_back(count, s);
            }
            break;
        }
        if (term < opt.term_floor && count > 16) break;
    }
    rep.last_partial_sum = s;

    if (threshold_hit) {
        rep.classification = DivergenceClass::Divergent;
        rep.value = pos_inf();
        rep.method = "partial-sum threshold " + std::to_string(opt.sum_threshold) +
                     " exceeded";
        return rep;
    }

    const BlockFit fit = fit_block_slope(rep.partial_sums);
    rep.block_slope = fit.slope;
    if (fit.blocks < 2 || fit.slope >= opt.slope_cut) {
        rep.classification = DivergenceClass::Divergent;
        rep.value = pos_inf();
        rep.method = "dyadic-block log-slope " + std::to_string(fit.slope) +
                     " >= " + std::to_string(opt.slope_cut);
    } else {
        rep.classification = DivergenceClass::Convergent;
        const double q = std::min(std::exp(fit.slope), 0.99);
        double tail = 0;
        if (rep.partial_sums.size() >= 2) {
            const auto& last = rep.partial_sums.back();
            const auto& prev = rep.partial_sums[rep.partial_sums.size() - 2];
            tail = (last.second - prev.second) * q / (1.0 - q);
        }
        rep.value = s + tail;
        rep.method = "dyadic-block log-slope " + std::to_string(fit.slope) +
                     " < " + std::to_string(opt.slope_cut) +
                     "; Richardson tail extrapolation";
    }
    return rep;
}

GrowthIntegral growth_integral(const TestFunction& v, const GrowthModel& g,
                               const Domain& K) {
    const Domain K_closed = K.closure();
    const Domain& D = v.domain;
    const AtomicMeasure nu = g.nu_M.restricted(
        [&](Point p) { return D.contains(p) && !K_closed.contains(p); });
    GrowthIntegral out;
    out.value = integrate([&v](Point p) { return v.value(p); }, nu);
    out.finite = std::isfinite(out.value);
    return out;
}

MajorizationReport check_majorization(const GridFunction& u, const GrowthModel& g,
                                      double tol) {
    const Lattice& lat = u.lattice();
    MajorizationReport rep;
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!u.in_mask(i, j) || !g.M.in_mask(i, j)) continue;
            const double du = u.at(i, j);
            if (is_neg_inf(du)) continue;
            const double bound = g.M.at(i, j) + g.const_shift;
            const double gap = du - bound;
            if (gap > rep.worst_gap) {
                rep.worst_gap = gap;
                rep.worst_node = lat.node(i, j);
            }
        }
    }
    rep.ok = rep.worst_gap <= tol;
    return rep;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::ForcedTrivial: return "FORCED_TRIVIAL";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
        case Verdict::HypothesisFailed: return "HYPOTHESIS_FAILED";
    }
    return "?";
}

Verdict verdict_from(bool integral_finite, bool sum_divergent, bool majorization_ok) {
    if (!integral_finite || !majorization_ok) return Verdict::HypothesisFailed;
    if (!sum_divergent) return Verdict::Inconclusive;
    return Verdict::ForcedTrivial;
}

namespace {

// Atomwise nu <= nu_u: every nu atom must be covered by nu_u mass at the same
// point (within a cell-scale snap).
bool check_minorization(const AtomicMeasure& nu, const AtomicMeasure& nu_u,
                        double snap, double tol) {
    for (const auto& a : nu.atoms) {
        double covered = 0;
        for (const auto& b : nu_u.atoms) {
            if (dist(a.p, b.p) <= snap) covered += b.w;
        }
        if (covered + tol < a.w) return false;
    }
    return true;
}

}  // namespace

UniquenessReport uniqueness_verdict(const TestFunction& v, const GrowthModel& g,
                                    const Domain& K, const ZeroGenerator& zeros,
                                    const GridFunction* u, const AtomicMeasure* nu,
                                    const AtomicMeasure* nu_u,
                                    const DivergenceOptions& opt) {
    UniquenessReport rep;
    rep.condition6 = growth_integral(v, g, K);
    rep.condition7b = divergence_sum(v, zeros, opt);
    if (u != nullptr) {
        rep.condition7c = check_majorization(*u, g);
    } else {
        rep.majorization_assumed = true;
        rep.condition7c.ok = true;
        rep.condition7c.worst_gap = 0;
    }
    if (nu != nullptr && nu_u != nullptr) {
        rep.minorization_ok =
            check_minorization(*nu, *nu_u, 0.5 * v.values.lattice().h, 1e-9);
    }

    const bool hypotheses_ok = rep.condition7c.ok && rep.minorization_ok;
    rep.verdict =
        verdict_from(rep.condition6.finite,
                     rep.condition7b.classification == DivergenceClass::Divergent,
                     hypotheses_ok);
    if (rep.verdict == Verdict::HypothesisFailed) {
        if (!rep.condition6.finite) {
            rep.culprit = "condition6";
        } else if (!rep.minorization_ok) {
            rep.culprit = "condition7a";
        } else {
            rep.culprit = "condition7c";
        }
    }
    return rep;
}

ContradictionTrace contradiction_bound_trace(const TestFunction& v,
                                             const GrowthModel& g, const Domain& K,
                                             Point x0, double r0, const GridFunction& u,
                                             const AtomicMeasure& nu_u, int n_levels) {
    ContradictionTrace tr{{}, 0, 0, 0, 0, 0, continue_test_function(v, x0, r0)};
    tr.c = tr.continuation.pole_coefficient;
    if (!(tr.c > 0) || !std::isfinite(tr.c)) {
        throw HypothesisError("continuation produced a degenerate pole coefficient");
    }
    const GridFunction& vt = tr.continuation.v_tilde;
    auto V = [&](Point p) {
        if (!v.domain.contains(p)) return 0.0;
        return vt.interpolate_filled(p, 0.0) / tr.c;
    };

    // b = sup of V on the sphere.
    for (int t = 0; t < 256; ++t) {
        const double th = 2.0 * std::numbers::pi * t / 256;
        tr.b = std::max(tr.b, V({x0.x + r0 * std::cos(th), x0.y + r0 * std::sin(th)}));
    }

    auto off_ball = [&](Point p) { return dist(p, x0) > r0; };
    const AtomicMeasure nu_off = nu_u.restricted(off_ball);
    for (int level = 0; level <= n_levels; ++level) {
        const long n = 1L << level;
        const double lhs = integrate(
            [&](Point p) { return std::max(0.0, V(p) - 1.0 / static_cast<double>(n)); },
            nu_off);
        tr.rows.push_back({n, lhs});
        tr.sup_lhs = std::max(tr.sup_lhs, lhs);
    }

    // Proof-chain constant: C = b nu_M(closed ball) + (C0 - u0(x0) + M0(x0)),
    // C1 = b nu_M(D1 minus closed ball) + C, bound = (1/c) int_{D\K} v dnu_M + C1.
    const SweepResult su = sweep_out_ball(u, nu_u, x0, r0);
    const SweepResult sM = sweep_out_ball(g.M, g.nu_M, x0, r0);
    double C0 = neg_inf();
    const Lattice& lat = u.lattice();
    for (int j = 0; j < lat.ny; ++j) {
        for (int i = 0; i < lat.nx; ++i) {
            if (!u.in_mask(i, j) || !g.M.in_mask(i, j)) continue;
            if (is_neg_inf(u.at(i, j))) continue;
            C0 = std::max(C0, u.at(i, j) - g.M.at(i, j));
        }
    }
    if (!std::isfinite(C0)) {
        throw HypothesisError("trace requires a finite majorization constant");
    }
    const double C = tr.b * g.nu_M.mass_where(
                                [&](Point p) { return dist(p, x0) <= r0; }) +
                     (C0 - su.u0.interpolate(x0) + sM.u0.interpolate(x0));
    const Domain& D1 = tr.continuation.D1;
    const double C1 =
        tr.b * g.nu_M.mass_where([&](Point p) {
            return D1.contains(p) && dist(p, x0) > r0;
        }) +
        C;
    tr.bound = growth_integral(v, g, K).value / tr.c + C1;

    tr.cross_check = integrate([&v](Point p) { return v.value(p); }, nu_off) / tr.c;
    return tr;
}

}  // namespace potentia
