#include "markovscope/sampling.hpp"

#include <cmath>
#include <numbers>

namespace markovscope {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed270b7a1fca9dULL));
}

double RandomStream::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::exponential() {
    return -std::log(uniform());
}

Complex RandomStream::complex_normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return Complex(r * std::cos(2.0 * std::numbers::pi * u2),
                   r * std::sin(2.0 * std::numbers::pi * u2));
}

int RandomStream::uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
}

CMatrix sample_gaussian_matrix(RandomStream& rng, int rows, int cols) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
    }
    return m;
}

CMatrix sample_gue_hermitian(RandomStream& rng, int dim) {
    CMatrix g = sample_gaussian_matrix(rng, dim, dim);
    return 0.5 * (g + g.adjoint().eval());
}

CMatrix sample_haar_unitary(RandomStream& rng, int dim) {
    CMatrix g = sample_gaussian_matrix(rng, dim, dim);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so the distribution is exactly Haar.
    for (int i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
    }
    return q;
}

CMatrix sample_density_hs(RandomStream& rng, int dim, int env_dim) {
    if (dim < 1 || env_dim < 1) throw DomainError("sample_density_hs: dimensions must be positive");
    CMatrix psi = sample_gaussian_matrix(rng, dim, env_dim);
    CMatrix rho = psi * psi.adjoint();
    rho /= rho.trace().real();
    return rho;
}

CMatrix sample_density_full_rank(RandomStream& rng, int dim) {
    CMatrix w = sample_density_hs(rng, dim, dim);
    return 0.95 * w + (0.05 / dim) * CMatrix::Identity(dim, dim);
}

std::vector<double> sample_dirichlet_flat(RandomStream& rng, int n) {
    std::vector<double> p(n);
    double total = 0.0;
    for (double& x : p) {
        x = rng.exponential();
        total += x;
    }
    for (double& x : p) x /= total;
    return p;
}

KrausChannel sample_channel(RandomStream& rng, int in_dim, int out_dim, int env_dim) {
    if (in_dim < 1 || out_dim < 1 || env_dim < 1) {
        throw DomainError("sample_channel: dimensions must be positive");
    }
    const int lifted = out_dim * env_dim;
    if (lifted < in_dim) {
        throw DomainError("sample_channel: out_dim * env_dim must be >= in_dim for an isometry");
    }
    CMatrix g = sample_gaussian_matrix(rng, lifted, in_dim);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix v = qr.householderQ() * CMatrix::Identity(lifted, in_dim);

    std::vector<CMatrix> ops;
    ops.reserve(env_dim);
    for (int mu = 0; mu < env_dim; ++mu) {
        CMatrix k(out_dim, in_dim);
        for (int o = 0; o < out_dim; ++o) k.row(o) = v.row(o * env_dim + mu);
        ops.push_back(std::move(k));
    }
    return make_kraus_channel(std::move(ops));
}

MarkovBlockSpec sample_markov_spec(RandomStream& rng, std::array<int, 3> dims, int blocks) {
    const int da = dims[0];
    const int db = dims[1];
    const int dc = dims[2];
    if (da < 1 || db < 1 || dc < 1) {
        throw DomainError("sample_markov_spec: dimensions must be positive");
    }
    if (blocks > db) {
        throw ValidationError("sample_markov_spec: " + std::to_string(blocks) +
                              " blocks cannot fit in dB = " + std::to_string(db));
    }

    // Random partition dB = sum_k dim_bL_k * dim_bR_k, with exactly `blocks`
    // summands when requested (later blocks need at least one dimension each).
    std::vector<std::pair<int, int>> shape;
    int remaining = db;
    while (remaining > 0) {
        std::vector<std::pair<int, int>> candidates;
        if (blocks > 0) {
            const int k = static_cast<int>(shape.size());
            if (k == blocks - 1) {
                for (int l = 1; l <= remaining; ++l) {
                    if (remaining % l == 0) candidates.emplace_back(l, remaining / l);
                }
            } else {
                const int cap = remaining - (blocks - k - 1);
                for (int l = 1; l <= cap; ++l) {
                    for (int r = 1; l * r <= cap; ++r) candidates.emplace_back(l, r);
                }
            }
        } else {
            for (int l = 1; l <= remaining; ++l) {
                for (int r = 1; l * r <= remaining; ++r) candidates.emplace_back(l, r);
            }
        }
        const auto pick = candidates[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(candidates.size()) - 1))];
        shape.push_back(pick);
        remaining -= pick.first * pick.second;
    }

    const auto weights = sample_dirichlet_flat(rng, static_cast<int>(shape.size()));
    MarkovBlockSpec spec;
    spec.dim_a = da;
    spec.dim_c = dc;
    for (std::size_t k = 0; k < shape.size(); ++k) {
        MarkovBlock blk;
        blk.weight = weights[k];
        blk.dim_left = shape[k].first;
        blk.dim_right = shape[k].second;
        blk.rho_left = sample_density_full_rank(rng, da * blk.dim_left);
        blk.rho_right = sample_density_full_rank(rng, blk.dim_right * dc);
        spec.blocks.push_back(std::move(blk));
    }
    return spec;
}

}  // namespace markovscope
