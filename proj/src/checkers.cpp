#include "markovscope/checkers.hpp"

#include <cmath>

namespace markovscope {

namespace {

void validate_block_density(const CMatrix& m, int expected_dim, const char* what) {
    if (m.rows() != m.cols() || m.rows() != expected_dim) {
        throw ShapeError(std::string("markov block: ") + what + " is " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()) + " but the block dims imply " +
                         std::to_string(expected_dim));
    }
    if (!all_finite(m)) throw ValidationError(std::string("markov block: ") + what + " has NaN/Inf");
    if (hermiticity_defect(m) > 1e-10 * max_abs(m)) {
        throw ValidationError(std::string("markov block: ") + what + " is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (m + m.adjoint().eval()));
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw ValidationError(std::string("markov block: ") + what + " has a negative eigenvalue");
    }
    if (std::abs(m.trace().real() - 1.0) > 1e-10 || std::abs(m.trace().imag()) > 1e-10) {
        throw ValidationError(std::string("markov block: ") + what + " trace differs from 1");
    }
}

// Rank of the intersection of two projector ranges: eigenvalues of P + Q
// equal 2 exactly on the common subspace and stay below it elsewhere.
int projector_intersection_rank(const CMatrix& p, const CMatrix& q) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(p + q);
    int rank = 0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        if (solver.eigenvalues()[i] > 2.0 - 1e-7) ++rank;
    }
    return rank;
}

}  // namespace

TripartiteState build_markov_state(const MarkovBlockSpec& spec) {
    if (spec.blocks.empty()) throw ValidationError("markov spec: block list is empty");
    if (spec.dim_a < 1 || spec.dim_c < 1) {
        throw ValidationError("markov spec: dA and dC must be positive");
    }
    double weight_sum = 0.0;
    for (const auto& b : spec.blocks) {
        if (b.weight < 0.0) throw ValidationError("markov spec: negative block weight");
        if (b.dim_left < 1 || b.dim_right < 1) {
            throw ValidationError("markov spec: block dimensions must be positive");
        }
        validate_block_density(b.rho_left, spec.dim_a * b.dim_left, "rho_left");
        validate_block_density(b.rho_right, b.dim_right * spec.dim_c, "rho_right");
        weight_sum += b.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-12) {
        throw ValidationError("markov spec: block weights sum to " + std::to_string(weight_sum));
    }

    const int da = spec.dim_a;
    const int dc = spec.dim_c;
    const int db = spec.dim_b();
    const Eigen::Index full = static_cast<Eigen::Index>(da) * db * dc;
    CMatrix rho = CMatrix::Zero(full, full);

    int b_offset = 0;
    for (const auto& blk : spec.blocks) {
        const int dl = blk.dim_left;
        const int dr = blk.dim_right;
        const CMatrix block = blk.weight * tensor(blk.rho_left, blk.rho_right);

        // Block index ((a*dl + l)*dr + r)*dC + c lands at global B index
        // b_offset + l*dr + r.
        const Eigen::Index block_dim = block.rows();
        std::vector<Eigen::Index> to_global(block_dim);
        for (Eigen::Index i = 0; i < block_dim; ++i) {
            const int c = static_cast<int>(i % dc);
            const int r = static_cast<int>((i / dc) % dr);
            const int l = static_cast<int>((i / (static_cast<Eigen::Index>(dc) * dr)) % dl);
            const int a = static_cast<int>(i / (static_cast<Eigen::Index>(dc) * dr * dl));
            const int b = b_offset + l * dr + r;
            to_global[i] = (static_cast<Eigen::Index>(a) * db + b) * dc + c;
        }
        for (Eigen::Index i = 0; i < block_dim; ++i) {
            for (Eigen::Index j = 0; j < block_dim; ++j) {
                rho(to_global[i], to_global[j]) += block(i, j);
            }
        }
        b_offset += dl * dr;
    }
    return make_tripartite_state(std::move(rho), {da, db, dc});
}

RuskaiResult check_ruskai(const TripartiteState& s, const SupportPolicy& policy) {
    const int da = s.dims[0];
    const int dc = s.dims[2];

    const CMatrix rab = s.marginal_ab();
    const CMatrix rbc = s.marginal_bc();
    const CMatrix rb = s.marginal_b();

    const CMatrix log_abc = matrix_log2(s.rho, policy);
    const CMatrix log_b = tensor(identity(da), tensor(matrix_log2(rb, policy), identity(dc)));
    const CMatrix log_ab = tensor(matrix_log2(rab, policy), identity(dc));
    const CMatrix log_bc = tensor(identity(da), matrix_log2(rbc, policy));

    const auto sd_abc = spectral(s.rho, policy);
    const CMatrix p = sd_abc.support_projector();

    RuskaiResult out;
    out.residual = trace_norm(p * (log_abc + log_b - log_ab - log_bc) * p);

    const CMatrix p_ab = tensor(spectral(rab, policy).support_projector(), identity(dc));
    const CMatrix p_bc = tensor(identity(da), spectral(rbc, policy).support_projector());
    out.degraded_support = sd_abc.support_rank < projector_intersection_rank(p_ab, p_bc);
    return out;
}

const std::vector<double>& default_t_grid() {
    static const std::vector<double> grid = {-2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0};
    return grid;
}

double check_petz_t(const TripartiteState& s, const std::vector<double>& t_grid,
                    const SupportPolicy& policy) {
    if (t_grid.empty()) throw DomainError("check_petz_t: empty t grid");

    const int da = s.dims[0];
    const int dc = s.dims[2];

    const auto sd_abc = spectral(s.rho, policy);
    const auto sd_ab = spectral(s.marginal_ab(), policy);
    const auto sd_bc = spectral(s.marginal_bc(), policy);
    const auto sd_b = spectral(s.marginal_b(), policy);
    require_psd(sd_abc, "check_petz_t(rho_ABC)");
    require_psd(sd_ab, "check_petz_t(rho_AB)");
    require_psd(sd_bc, "check_petz_t(rho_BC)");
    require_psd(sd_b, "check_petz_t(rho_B)");

    const auto impow = [](const SpectralDecomposition& sd, double t) {
        return sd.map_support([t](double x) {
            const double phase = t * std::log(x);
            return Complex(std::cos(phase), std::sin(phase));
        });
    };

    double worst = 0.0;
    for (double t : t_grid) {
        const CMatrix lhs = impow(sd_abc, t) * tensor(identity(da), impow(sd_bc, -t));
        const CMatrix rhs = tensor(impow(sd_ab, t), identity(dc)) *
                            tensor(identity(da), tensor(impow(sd_b, -t), identity(dc)));
        worst = std::max(worst, trace_norm(lhs - rhs));
    }
    return worst;
}

std::string to_string(StateClass c) {
    switch (c) {
        case StateClass::D1: return "D1";
        case StateClass::D2: return "D2";
        case StateClass::D3: return "D3";
    }
    return "D?";
}

ClassLabel classify(const TripartiteState& s, const MOperatorBundle& bundle, double eta_comm,
                    double eta_state) {
    ClassLabel label;
    label.comm_norm = bundle.commutator_trace_norm;
    label.dist_mm = trace_norm(s.rho - bundle.mm_dagger);
    label.eta_comm = eta_comm;
    label.eta_state = eta_state;
    if (label.comm_norm > eta_comm) {
        label.cls = StateClass::D3;
    } else if (label.dist_mm <= eta_state) {
        label.cls = StateClass::D1;
    } else {
        label.cls = StateClass::D2;
    }
    return label;
}

}  // namespace markovscope
