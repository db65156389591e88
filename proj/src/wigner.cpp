#include "pairlat/wigner.hpp"

#include <cmath>

namespace pairlat {

WignerContext make_wigner_context(const ModelSpec& spec, const PairingSpectrum& ps,
                                  Complex delta, const MomentOptions& opt) {
    spec.validate();
    const DerivedScalars ds = derived_scalars(spec);
    check_nonresonant(delta, ds.u);

    WignerContext ctx;
    ctx.m_over_u = build_pairing_matrix(spec) / ds.u;
    ctx.ps = ps;
    ctx.delta = delta;
    ctx.opt = opt;
    ctx.log_norm = log_normalization(ps, delta, opt);
    return ctx;
}

namespace {

double phase_space_density(const WignerContext& ctx, const VectorXc& alpha, double scale,
                           double gauss_coeff, double log_pref_per_mode) {
    if (alpha.size() != ctx.m_over_u.rows())
        throw std::invalid_argument("wigner_at: phase-space point has wrong mode count");
    const VectorXc ac = alpha.conjugate();
    const Complex s = (ac.transpose() * ctx.m_over_u * ac)(0, 0);

    SeriesOptions so = ctx.opt.series;
    so.tol = std::min(so.tol, ctx.opt.tol);
    const SeriesResult f = hyper_pfq({}, {ctx.delta}, -scale * s, so);

    const double log_w = alpha.size() * log_pref_per_mode + 2.0 * f.value.log_mag -
                         gauss_coeff * alpha.squaredNorm() - ctx.log_norm;
    return std::exp(log_w);
}

}  // namespace

double wigner_at(const WignerContext& ctx, const VectorXc& alpha) {
    return phase_space_density(ctx, alpha, 1.0, 2.0, std::log(2.0 / M_PI));
}

double husimi_q_at(const WignerContext& ctx, const VectorXc& alpha) {
    return phase_space_density(ctx, alpha, 0.5, 1.0, std::log(1.0 / M_PI));
}

double wigner_norm_check(const WignerContext& ctx, double radius, int points_per_axis) {
    const int n = static_cast<int>(ctx.m_over_u.rows());
    if (n > 2) throw std::invalid_argument("wigner_norm_check: supported only for n <= 2");
    if (points_per_axis < 2 || radius <= 0.0)
        throw std::invalid_argument("wigner_norm_check: bad quadrature parameters");

    const int p = points_per_axis;
    const double h = 2.0 * radius / (p - 1);
    std::vector<double> axis(p);
    for (int i = 0; i < p; ++i) axis[i] = -radius + i * h;
    // trapezoid end-point weights; the integrand decays to ~0 at the edges anyway
    auto wt = [&](int i) { return (i == 0 || i == p - 1) ? 0.5 : 1.0; };

    double total = 0.0;
    VectorXc alpha(n);
    if (n == 1) {
        for (int ix = 0; ix < p; ++ix)
            for (int iy = 0; iy < p; ++iy) {
                alpha(0) = Complex(axis[ix], axis[iy]);
                total += wt(ix) * wt(iy) * wigner_at(ctx, alpha);
            }
        return total * h * h;
    }
    for (int ix = 0; ix < p; ++ix)
        for (int iy = 0; iy < p; ++iy)
            for (int jx = 0; jx < p; ++jx)
                for (int jy = 0; jy < p; ++jy) {
                    alpha(0) = Complex(axis[ix], axis[iy]);
                    alpha(1) = Complex(axis[jx], axis[jy]);
                    total += wt(ix) * wt(iy) * wt(jx) * wt(jy) * wigner_at(ctx, alpha);
                }
    return total * h * h * h * h;
}

double max_pairing_concentration(const PairingSpectrum& ps, Complex delta,
                                 const MomentOptions& opt) {
    const Eigen::VectorXd occ = mode_occupations(ps, delta, opt);
    const double total = occ.sum();
    if (total <= 0.0)
        throw std::domain_error("max_pairing_concentration: zero total occupation");
    double top = 0.0;
    for (int j : ps.classes.front()) top += occ(j);
    return top / total;
}

}  // namespace pairlat
