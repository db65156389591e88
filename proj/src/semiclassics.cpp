#include "pairlat/semiclassics.hpp"

#include <algorithm>
#include <cmath>

namespace pairlat {

VectorXc eom_rhs(const ModelSpec& spec, const PairingSpectrum& ps, const VectorXc& beta) {
    const DerivedScalars ds = derived_scalars(spec);
    const double r2 = beta.squaredNorm();
    const Complex common = 2.0 * r2 + 1.0 - ds.delta_eff / ds.u;
    VectorXc rhs(beta.size());
    for (Eigen::Index j = 0; j < beta.size(); ++j)
        rhs(j) = Complex(0, -1) * ds.u *
                 (2.0 * ps.lambda(j) * std::conj(beta(j)) + beta(j) * common);
    return rhs;
}

double fixed_point_residual(const ModelSpec& spec, const PairingSpectrum& ps,
                            const VectorXc& beta) {
    const DerivedScalars ds = derived_scalars(spec);
    return (eom_rhs(spec, ps, beta) / ds.u).cwiseAbs().maxCoeff();
}

namespace {

struct RingGeometry {
    double radius2 = 0.0;
    double theta = 0.0;
    bool exists = false;
};

// |2R^2 + 1 - Delta_eff/u| = 2 lambda fixes R and the common phase
RingGeometry ring_geometry(const ModelSpec& spec, double lambda, bool plus_root) {
    const DerivedScalars ds = derived_scalars(spec);
    RingGeometry rg;
    const double wobble = 0.5 * spec.kappa / ds.u;   // kappa / (2u)
    const double disc = 4.0 * lambda * lambda - wobble * wobble;
    if (disc < 0.0) return rg;
    const double root = std::sqrt(disc);
    const double r2 =
        0.5 * (spec.delta / ds.u - 1.0 + (plus_root ? root : -root));
    if (r2 <= 0.0) return rg;
    rg.radius2 = r2;
    // sin 2theta = -kappa/(4 u lambda); cos 2theta = -(2R^2+1-Delta/u)/(2 lambda)
    const double s2 = -spec.kappa / (2.0 * ds.u) / (2.0 * lambda);
    const double c2 = -(2.0 * r2 + 1.0 - spec.delta / ds.u) / (2.0 * lambda);
    rg.theta = 0.5 * std::atan2(s2, c2);
    rg.exists = true;
    return rg;
}

}  // namespace

std::optional<SpherePoint> stable_sphere(const ModelSpec& spec, const PairingSpectrum& ps) {
    spec.validate();
    const RingGeometry rg = ring_geometry(spec, ps.lambda_star, true);
    if (!rg.exists) return std::nullopt;
    SpherePoint sp;
    sp.radius = std::sqrt(rg.radius2);
    sp.theta = rg.theta;
    sp.multiplicity = ps.multiplicity;
    const RingGeometry rm = ring_geometry(spec, ps.lambda_star, false);
    if (rm.exists) {
        sp.minus_exists = true;
        sp.radius_minus = std::sqrt(rm.radius2);
    }
    return sp;
}

std::optional<FixedPoint> ring_fixed_point(const ModelSpec& spec, const PairingSpectrum& ps,
                                           int cls, const Eigen::VectorXd& dir,
                                           bool plus_root) {
    if (cls < 0 || cls >= static_cast<int>(ps.classes.size()))
        throw std::invalid_argument("ring_fixed_point: class index out of range");
    const auto& members = ps.classes[cls];
    if (dir.size() != static_cast<Eigen::Index>(members.size()))
        throw std::invalid_argument("ring_fixed_point: direction size mismatch");
    const double lambda = ps.lambda(members.front());
    const RingGeometry rg = ring_geometry(spec, lambda, plus_root);
    if (!rg.exists) return std::nullopt;

    FixedPoint fp;
    fp.lambda_class = lambda;
    fp.theta = rg.theta;
    fp.radius = std::sqrt(rg.radius2);
    fp.beta = VectorXc::Zero(ps.lambda.size());
    const Eigen::VectorXd unit = dir / dir.norm();
    for (size_t t = 0; t < members.size(); ++t)
        fp.beta(members[t]) = std::polar(fp.radius, rg.theta) * unit(t);
    return fp;
}

std::vector<Complex> stability_eigenvalues_closed(const ModelSpec& spec,
                                                  const PairingSpectrum& ps,
                                                  const FixedPoint& fp) {
    const DerivedScalars ds = derived_scalars(spec);
    const double u = ds.u;
    const double kh = 0.5 * spec.kappa;
    const int n = static_cast<int>(ps.lambda.size());
    std::vector<Complex> out;
    out.reserve(2 * n);

    if (fp.radius == 0.0) {
        for (int j = 0; j < n; ++j) {
            const Complex rad = std::sqrt(
                Complex(4.0 * u * u * ps.lambda(j) * ps.lambda(j) -
                            (u - spec.delta) * (u - spec.delta),
                        0.0));
            out.push_back(-kh + rad);
            out.push_back(-kh - rad);
        }
        return out;
    }

    const double r2 = fp.radius * fp.radius;
    const Complex rad_radial = std::sqrt(Complex(
        kh * kh - 8.0 * u * u * r2 * (2.0 * r2 + 1.0) + 8.0 * u * spec.delta * r2, 0.0));
    out.push_back(-kh + rad_radial);
    out.push_back(-kh - rad_radial);

    // transverse pairs for every mode but one representative of the class
    bool skipped = false;
    for (int j = 0; j < n; ++j) {
        if (!skipped && std::abs(ps.lambda(j) - fp.lambda_class) <=
                            1e-10 * std::max(1.0, ps.lambda_star)) {
            skipped = true;
            continue;
        }
        const Complex rad = std::sqrt(Complex(
            kh * kh -
                4.0 * u * u *
                    (fp.lambda_class * fp.lambda_class - ps.lambda(j) * ps.lambda(j)),
            0.0));
        out.push_back(-kh + rad);
        out.push_back(-kh - rad);
    }
    return out;
}

namespace {

Eigen::VectorXd real_rhs(const ModelSpec& spec, const PairingSpectrum& ps,
                         const Eigen::VectorXd& x) {
    const int n = static_cast<int>(ps.lambda.size());
    VectorXc beta(n);
    for (int j = 0; j < n; ++j) beta(j) = Complex(x(2 * j), x(2 * j + 1));
    const VectorXc f = eom_rhs(spec, ps, beta);
    Eigen::VectorXd y(2 * n);
    for (int j = 0; j < n; ++j) {
        y(2 * j) = f(j).real();
        y(2 * j + 1) = f(j).imag();
    }
    return y;
}

Eigen::MatrixXd jacobian_at_step(const ModelSpec& spec, const PairingSpectrum& ps,
                                 const Eigen::VectorXd& x0, double h) {
    const int dim = static_cast<int>(x0.size());
    Eigen::MatrixXd j(dim, dim);
    Eigen::VectorXd x = x0;
    for (int c = 0; c < dim; ++c) {
        const double hc = h * std::max(1.0, std::abs(x0(c)));
        x(c) = x0(c) + hc;
        const Eigen::VectorXd fp = real_rhs(spec, ps, x);
        x(c) = x0(c) - hc;
        const Eigen::VectorXd fm = real_rhs(spec, ps, x);
        x(c) = x0(c);
        j.col(c) = (fp - fm) / (2.0 * hc);
    }
    return j;
}

}  // namespace

Eigen::MatrixXd jacobian_numeric(const ModelSpec& spec, const PairingSpectrum& ps,
                                 const VectorXc& beta, double step) {
    const int n = static_cast<int>(beta.size());
    Eigen::VectorXd x0(2 * n);
    for (int j = 0; j < n; ++j) {
        x0(2 * j) = beta(j).real();
        x0(2 * j + 1) = beta(j).imag();
    }
    // the vector field is cubic, so one Richardson step removes the h^2
    // truncation error exactly and leaves rounding noise only
    const Eigen::MatrixXd j2 = jacobian_at_step(spec, ps, x0, 2.0 * step);
    const Eigen::MatrixXd j1 = jacobian_at_step(spec, ps, x0, step);
    return (4.0 * j1 - j2) / 3.0;
}

std::vector<Complex> stability_eigenvalues_numeric(const ModelSpec& spec,
                                                   const PairingSpectrum& ps,
                                                   const VectorXc& beta) {
    const Eigen::MatrixXd j = jacobian_numeric(spec, ps, beta);
    Eigen::EigenSolver<Eigen::MatrixXd> es(j);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("stability_eigenvalues_numeric: eigensolver failed");
    std::vector<Complex> out(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out[i] = es.eigenvalues()(i);
    return out;
}

double spectrum_distance(std::vector<Complex> a, std::vector<Complex> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const Complex& x : a) {
        double best = std::numeric_limits<double>::infinity();
        size_t best_i = 0;
        for (size_t i = 0; i < b.size(); ++i) {
            const double d = std::abs(x - b[i]);
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        worst = std::max(worst, best);
        b.erase(b.begin() + static_cast<long>(best_i));
    }
    return worst;
}

}  // namespace pairlat
