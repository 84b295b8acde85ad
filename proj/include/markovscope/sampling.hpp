#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "markovscope/checkers.hpp"
#include "markovscope/linalg.hpp"
#include "markovscope/markov_ops.hpp"

namespace markovscope {

std::uint64_t splitmix64(std::uint64_t x);

// Stream seed for sample `index` of run `seed`. Workers share nothing:
// every index owns an independent generator, so parallel and serial scans
// visit identical streams.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index);

// mt19937_64 plus hand-rolled variate transforms, so the byte stream of a
// seeded run does not depend on the standard library's distribution
// implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform();            // (0, 1)
    double normal();             // standard normal, Box-Muller
    double exponential();        // rate 1
    Complex complex_normal();    // independent N(0,1) real and imaginary parts
    int uniform_int(int lo, int hi);  // inclusive range

private:
    std::mt19937_64 engine_;
};

inline RandomStream make_stream(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(derive_stream_seed(seed, index));
}

CMatrix sample_gaussian_matrix(RandomStream& rng, int rows, int cols);
CMatrix sample_gue_hermitian(RandomStream& rng, int dim);

// Haar-distributed unitary via QR of a Gaussian matrix with phase fixing.
CMatrix sample_haar_unitary(RandomStream& rng, int dim);

// Reduction of a Haar-random pure state on dim * env_dim; env_dim = dim gives
// the Hilbert-Schmidt measure, env_dim = 1 a random pure state.
CMatrix sample_density_hs(RandomStream& rng, int dim, int env_dim);

// Full-rank density matrix: Wishart normalized, mixed with a 5% uniform
// floor so generated Markov blocks keep bounded condition numbers.
CMatrix sample_density_full_rank(RandomStream& rng, int dim);

// Flat Dirichlet over n outcomes.
std::vector<double> sample_dirichlet_flat(RandomStream& rng, int n);

// Random isometry into out_dim * env_dim, sliced into env_dim Kraus operators.
KrausChannel sample_channel(RandomStream& rng, int in_dim, int out_dim, int env_dim);

// Random block structure for dB plus full-rank block states and Dirichlet
// weights; every output satisfies the Markov-chain conditions exactly.
// blocks = 0 leaves the number of blocks to the partition sampler; blocks > 0
// forces exactly that many (ValidationError when dB cannot host them).
MarkovBlockSpec sample_markov_spec(RandomStream& rng, std::array<int, 3> dims, int blocks = 0);

}  // namespace markovscope
