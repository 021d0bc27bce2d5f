#include "hmk/geometry.hpp"

#include "hmk/errors.hpp"
#include "hmk/parallel.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace hmk {

namespace {

void require_same_dimension(const BasisMatrix& b1, const BasisMatrix& b2) {
    if (b1.dimension() != b2.dimension()) throw InvalidInput("bases have different dimensions");
    if (b1.dimension() < 2) throw InvalidInput("dimension must be at least 2");
}

std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

Eigen::MatrixXd plane_basis(const GrassmannFrame& f, int rank) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f.projector);
    // eigenvalues ascending; the top `rank` span the range
    return eig.eigenvectors().rightCols(rank);
}

}  // namespace

double chordal_distance_sq(const BasisMatrix& b1, const BasisMatrix& b2) {
    require_same_dimension(b1, b2);
    const int n = b1.dimension();
    const Eigen::MatrixXd o = overlap_abs2(b1, b2);
    const double inv_n = 1.0 / n;
    const auto term = [&](int a, int b) { return (o(a, b) - inv_n) * (o(a, b) - inv_n); };
    // (a, b) and (b, a) are added as a pair so that swapping the arguments gives the same bits
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
        s += term(a, a);
        for (int b = a + 1; b < n; ++b) s += term(a, b) + term(b, a);
    }
    return 1.0 - s / (n - 1);
}

Eigen::VectorXd bloch_vector(const CVector& e) {
    const int n = static_cast<int>(e.size());
    const double scale = std::sqrt(2.0 * n / (n - 1)) / std::sqrt(2.0);
    Eigen::VectorXd out(n * n - 1);
    int i = 0;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            const cplx x = e(j) * std::conj(e(k));
            out(i++) = scale * std::sqrt(2.0) * x.real();
            out(i++) = -scale * std::sqrt(2.0) * x.imag();
        }
    double partial = 0.0;
    for (int l = 1; l < n; ++l) {
        partial += std::norm(e(l - 1));
        out(i++) = scale * (partial - l * std::norm(e(l))) / std::sqrt(static_cast<double>(l) * (l + 1));
    }
    return out;
}

GrassmannFrame GrassmannFrame::of(const BasisMatrix& b) {
    const int n = b.dimension();
    GrassmannFrame f;
    f.frame.resize(n * n - 1, n);
    const double s = std::sqrt((n - 1.0) / n);
    for (int c = 0; c < n; ++c) f.frame.col(c) = s * bloch_vector(b.entries().col(c));
    f.projector = f.frame * f.frame.transpose();
    const long long n2 = static_cast<long long>(n) * n;
    f.embedding_dimension = (n2 * n2 - n2 - 2) / 2;
    return f;
}

double chordal_distance_via_projectors(const BasisMatrix& b1, const BasisMatrix& b2) {
    require_same_dimension(b1, b2);
    const int n = b1.dimension();
    const Eigen::MatrixXd diff = GrassmannFrame::of(b1).projector - GrassmannFrame::of(b2).projector;
    return (diff * diff).trace() / (2.0 * (n - 1));
}

Eigen::VectorXd principal_angles(const BasisMatrix& b1, const BasisMatrix& b2) {
    require_same_dimension(b1, b2);
    const int n = b1.dimension();
    const Eigen::MatrixXd q1 = plane_basis(GrassmannFrame::of(b1), n - 1);
    const Eigen::MatrixXd q2 = plane_basis(GrassmannFrame::of(b2), n - 1);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(q1.transpose() * q2);
    Eigen::VectorXd angles = svd.singularValues().unaryExpr([](double c) { return std::acos(std::clamp(c, -1.0, 1.0)); });
    std::sort(angles.data(), angles.data() + angles.size());
    return angles;
}

double chordal_distance_from_angles(const BasisMatrix& b1, const BasisMatrix& b2) {
    const int n = b1.dimension();
    const Eigen::VectorXd angles = principal_angles(b1, b2);
    double s = 0.0;
    for (int i = 0; i < angles.size(); ++i) s += std::cos(angles(i)) * std::cos(angles(i));
    return 1.0 - s / (n - 1);
}

BasisMatrix random_basis(int n, std::mt19937_64& rng) {
    if (n < 2) throw InvalidInput("random_basis: dimension must be at least 2");
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c) = {re, im};
        }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < n; ++c) {
        const cplx d = r(c, c);
        const double m = std::abs(d);
        if (m > 0) q.col(c) *= d / m;
    }
    return BasisMatrix(std::move(q));
}

BasisMatrix random_basis(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_basis(n, rng);
}

Estimate average_distance_estimate(int n, std::size_t samples, std::uint64_t seed, int workers) {
    if (samples < 2) throw InvalidInput("average_distance_estimate: need at least two samples");
    constexpr std::size_t block = 4096;
    const std::size_t blocks = (samples + block - 1) / block;
    std::vector<double> sum(blocks, 0.0);
    std::vector<double> sum_sq(blocks, 0.0);
    const BasisMatrix identity = BasisMatrix::identity(n);
    parallel_for(blocks, workers, [&](std::size_t k) {
        auto rng = block_rng(seed, 1, k);
        const std::size_t count = std::min(block, samples - k * block);
        for (std::size_t i = 0; i < count; ++i) {
            const double d = chordal_distance_sq(identity, random_basis(n, rng));
            sum[k] += d;
            sum_sq[k] += d * d;
        }
    });
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t k = 0; k < blocks; ++k) {
        s += sum[k];
        s2 += sum_sq[k];
    }
    const double m = static_cast<double>(samples);
    Estimate e;
    e.samples = samples;
    e.mean = s / m;
    const double var = std::max(0.0, (s2 - m * e.mean * e.mean) / (m - 1.0));
    e.std_error = std::sqrt(var / m);
    return e;
}

double mub_quality_f(const std::vector<BasisMatrix>& bases) {
    if (bases.size() < 2) throw InvalidInput("mub_quality_f: need at least two bases");
    double f = 0.0;
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (std::size_t j = 0; j < bases.size(); ++j)
            if (i != j) f += chordal_distance_sq(bases[i], bases[j]);
    return f;
}

RandomSetScan random_set_scan(int n, std::size_t bases, std::uint64_t seed, int workers) {
    constexpr std::size_t block = 28000;  // divisible by 4 and 7
    const std::size_t blocks = (bases + block - 1) / block;
    std::vector<double> best4(blocks, 0.0);
    std::vector<double> best7(blocks, 0.0);
    const auto best_in = [n](std::mt19937_64& rng, std::size_t count, std::size_t group) {
        double best = 0.0;
        std::vector<BasisMatrix> set(group);
        for (std::size_t g = 0; g + group <= count; g += group) {
            for (auto& b : set) b = random_basis(n, rng);
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < group; ++i)
                for (std::size_t j = i + 1; j < group; ++j) worst = std::min(worst, chordal_distance_sq(set[i], set[j]));
            best = std::max(best, worst);
        }
        return best;
    };
    parallel_for(blocks, workers, [&](std::size_t k) {
        const std::size_t count = std::min(block, bases - k * block);
        auto rng4 = block_rng(seed, 4, k);
        auto rng7 = block_rng(seed, 7, k);
        best4[k] = best_in(rng4, count, 4);
        best7[k] = best_in(rng7, count, 7);
    });
    RandomSetScan out;
    out.bases = bases;
    for (std::size_t k = 0; k < blocks; ++k) {
        out.best_min_distance_4 = std::max(out.best_min_distance_4, best4[k]);
        out.best_min_distance_7 = std::max(out.best_min_distance_7, best7[k]);
    }
    return out;
}

}  // namespace hmk
