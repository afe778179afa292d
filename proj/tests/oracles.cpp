#include "oracles.hpp"

#include <cmath>

namespace oracles {

Eigen::MatrixXd to_dense(const gfilt::Shift& s) {
    const auto n = static_cast<Eigen::Index>(s.dim());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (const auto& e : s.row(i))
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) = e.value;
    return m;
}

double MonomialPoly::evaluate(std::span<const double> t) const {
    // Horner along the last axis, recursing outward via explicit collapse
    std::vector<long double> work(coeffs.begin(), coeffs.end());
    for (std::size_t k = degrees.size(); k-- > 0;) {
        const long double arg =
            static_cast<long double>(t[k]) - (centers.empty() ? 0.0L : centers[k]);
        const std::size_t len = degrees[k] + 1;
        const std::size_t blocks = work.size() / len;
        for (std::size_t b = 0; b < blocks; ++b) {
            long double acc = 0.0L;
            for (std::size_t j = len; j-- > 0;) acc = acc * arg + work[b * len + j];
            work[b] = acc;
        }
        work.resize(blocks);
    }
    return static_cast<double>(work[0]);
}

namespace {

// (M+1)x(M+1) change-of-basis matrix B with column k holding the monomial
// coefficients (in t) of T_k(u), u = alpha t + beta.
std::vector<std::vector<long double>> cheb_to_monomial_matrix(std::size_t degree, long double alpha,
                                                              long double beta) {
    // T_k as monomials in u
    std::vector<std::vector<long double>> t_in_u(degree + 1);
    t_in_u[0] = {1.0L};
    if (degree >= 1) t_in_u[1] = {0.0L, 1.0L};
    for (std::size_t k = 2; k <= degree; ++k) {
        auto& cur = t_in_u[k];
        cur.assign(k + 1, 0.0L);
        for (std::size_t j = 0; j < t_in_u[k - 1].size(); ++j) cur[j + 1] += 2.0L * t_in_u[k - 1][j];
        for (std::size_t j = 0; j < t_in_u[k - 2].size(); ++j) cur[j] -= t_in_u[k - 2][j];
    }
    // powers of (alpha t + beta) as monomials in t
    std::vector<std::vector<long double>> u_pow(degree + 1);
    u_pow[0] = {1.0L};
    for (std::size_t p = 1; p <= degree; ++p) {
        u_pow[p].assign(p + 1, 0.0L);
        for (std::size_t j = 0; j < u_pow[p - 1].size(); ++j) {
            u_pow[p][j] += beta * u_pow[p - 1][j];
            u_pow[p][j + 1] += alpha * u_pow[p - 1][j];
        }
    }
    std::vector<std::vector<long double>> basis(degree + 1,
                                                std::vector<long double>(degree + 1, 0.0L));
    for (std::size_t k = 0; k <= degree; ++k)
        for (std::size_t p = 0; p < t_in_u[k].size(); ++p)
            for (std::size_t j = 0; j < u_pow[p].size(); ++j)
                basis[k][j] += t_in_u[k][p] * u_pow[p][j];
    return basis;
}

// Applies the basis matrix along the last (contiguous) axis, then rotates
// that axis to the front, mirroring the tensor layout convention.
std::vector<long double> apply_axis_matrix(const std::vector<long double>& data,
                                           std::size_t axis_len,
                                           const std::vector<std::vector<long double>>& basis) {
    const std::size_t blocks = data.size() / axis_len;
    std::vector<long double> out(data.size(), 0.0L);
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t k = 0; k < axis_len; ++k) {
            const long double c = data[b * axis_len + k];
            if (c == 0.0L) continue;
            for (std::size_t j = 0; j < axis_len; ++j) out[b * axis_len + j] += c * basis[k][j];
        }
    std::vector<long double> rotated(data.size());
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t k = 0; k < axis_len; ++k) rotated[k * blocks + b] = out[b * axis_len + k];
    return rotated;
}

} // namespace

MonomialPoly to_monomial(const gfilt::MultiPoly& p, bool centered) {
    const std::size_t d = p.dims();
    std::vector<double> centers(d, 0.0);
    std::vector<long double> work(p.coeffs().begin(), p.coeffs().end());
    for (std::size_t round = 0; round < d; ++round) {
        const std::size_t axis = d - 1 - round;
        const gfilt::Interval& iv = p.cube().interval(axis);
        // u = alpha (t - center) + beta in the variable the expansion uses
        const long double alpha = 2.0L / static_cast<long double>(iv.width());
        long double beta = -(static_cast<long double>(iv.hi) + static_cast<long double>(iv.lo)) /
                           static_cast<long double>(iv.width());
        if (centered) {
            centers[axis] = iv.midpoint();
            beta += alpha * static_cast<long double>(centers[axis]);
        }
        const auto basis = cheb_to_monomial_matrix(p.degrees()[axis], alpha, beta);
        work = apply_axis_matrix(work, p.degrees()[axis] + 1, basis);
    }
    MonomialPoly out{p.degrees(), std::move(work), {}};
    if (centered) out.centers = std::move(centers);
    return out;
}

Eigen::MatrixXd dense_matrix_poly(const MonomialPoly& p, const std::vector<gfilt::Shift>& shifts) {
    using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const auto n = static_cast<Eigen::Index>(shifts[0].dim());
    const std::size_t d = p.degrees.size();

    // power tables per shift (centered expansions use powers of S - c I);
    // long double keeps the oracle below the tolerances it certifies
    std::vector<std::vector<MatrixXld>> powers(d);
    for (std::size_t k = 0; k < d; ++k) {
        powers[k].push_back(MatrixXld::Identity(n, n));
        MatrixXld base = to_dense(shifts[k]).cast<long double>();
        if (!p.centers.empty())
            base -= static_cast<long double>(p.centers[k]) * MatrixXld::Identity(n, n);
        for (std::size_t l = 1; l <= p.degrees[k]; ++l) powers[k].push_back(powers[k][l - 1] * base);
    }

    MatrixXld acc = MatrixXld::Zero(n, n);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t lin = 0; lin < p.coeffs.size(); ++lin) {
        if (p.coeffs[lin] != 0.0L) {
            MatrixXld term = powers[0][idx[0]];
            for (std::size_t k = 1; k < d; ++k) term = term * powers[k][idx[k]];
            acc += p.coeffs[lin] * term;
        }
        for (std::size_t k = d; k-- > 0;) {
            if (++idx[k] <= p.degrees[k]) break;
            idx[k] = 0;
        }
    }
    return acc.cast<double>();
}

std::vector<double> circulant_laplacian_eigenvalues(std::size_t n,
                                                    const std::vector<std::size_t>& generators) {
    constexpr double kTau = 6.28318530717958647692528676655900577;
    std::vector<double> eigenvalues(n);
    for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (std::size_t q : generators)
            sum += std::cos(kTau * static_cast<double>(k) * static_cast<double>(q) /
                            static_cast<double>(n));
        eigenvalues[k] = 1.0 - sum / static_cast<double>(generators.size());
    }
    return eigenvalues;
}

double dense_spectral_radius(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
    double rho = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        rho = std::max(rho, std::abs(es.eigenvalues()(i)));
    return rho;
}

} // namespace oracles
