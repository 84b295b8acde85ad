#include "markovscope/markov_ops.hpp"

#include <algorithm>
#include <cmath>

namespace markovscope {

CMatrix KrausChannel::apply(const CMatrix& x) const {
    if (x.rows() != input_dim || x.cols() != input_dim) {
        throw ShapeError("KrausChannel::apply: operand dimension " + std::to_string(x.rows()) +
                         " does not match channel input " + std::to_string(input_dim));
    }
    CMatrix out = CMatrix::Zero(output_dim, output_dim);
    for (const auto& k : kraus) out += k * x * k.adjoint();
    return out;
}

CMatrix KrausChannel::apply_adjoint(const CMatrix& y) const {
    if (y.rows() != output_dim || y.cols() != output_dim) {
        throw ShapeError("KrausChannel::apply_adjoint: operand dimension " + std::to_string(y.rows()) +
                         " does not match channel output " + std::to_string(output_dim));
    }
    CMatrix out = CMatrix::Zero(input_dim, input_dim);
    for (const auto& k : kraus) out += k.adjoint() * y * k;
    return out;
}

KrausChannel make_kraus_channel(std::vector<CMatrix> kraus_ops) {
    if (kraus_ops.empty()) throw ValidationError("kraus channel: empty operator list");
    const Eigen::Index out_dim = kraus_ops.front().rows();
    const Eigen::Index in_dim = kraus_ops.front().cols();
    if (out_dim < 1 || in_dim < 1) throw ValidationError("kraus channel: empty operator");
    CMatrix completeness = CMatrix::Zero(in_dim, in_dim);
    for (const auto& k : kraus_ops) {
        if (k.rows() != out_dim || k.cols() != in_dim) {
            throw ShapeError("kraus channel: operators must share a common shape");
        }
        if (!all_finite(k)) throw ValidationError("kraus channel: operator has NaN or Inf entries");
        completeness += k.adjoint() * k;
    }
    completeness -= CMatrix::Identity(in_dim, in_dim);
    if (max_abs(completeness) > 1e-9) {
        throw ValidationError("kraus channel: sum K^dagger K deviates from identity by " +
                              std::to_string(max_abs(completeness)));
    }
    KrausChannel ch;
    ch.input_dim = static_cast<int>(in_dim);
    ch.output_dim = static_cast<int>(out_dim);
    ch.kraus = std::move(kraus_ops);
    return ch;
}

KrausChannel identity_channel(int dim) {
    return make_kraus_channel({identity(dim)});
}

KrausChannel partial_trace_channel(const std::vector<int>& dims, const std::vector<int>& keep) {
    std::vector<int> kept(keep);
    std::sort(kept.begin(), kept.end());
    std::vector<int> traced;
    for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
        if (!std::binary_search(kept.begin(), kept.end(), i)) traced.push_back(i);
    }
    const auto keep_off = factor_offsets(dims, kept);
    const auto tr_off = factor_offsets(dims, traced);
    Eigen::Index full = 1;
    for (int d : dims) full *= d;

    std::vector<CMatrix> ops;
    ops.reserve(tr_off.size());
    for (Eigen::Index t : tr_off) {
        CMatrix k = CMatrix::Zero(static_cast<Eigen::Index>(keep_off.size()), full);
        for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(keep_off.size()); ++r) {
            k(r, keep_off[r] + t) = Complex(1.0, 0.0);
        }
        ops.push_back(std::move(k));
    }
    return make_kraus_channel(std::move(ops));
}

MOperatorBundle build_m_bundle(const TripartiteState& s, const SupportPolicy& policy) {
    const int da = s.dims[0];
    const int dc = s.dims[2];

    const CMatrix sqrt_ab = matrix_sqrt(s.marginal_ab(), policy);
    const CMatrix inv_sqrt_b = matrix_inv_sqrt(s.marginal_b(), policy);
    const CMatrix sqrt_bc = matrix_sqrt(s.marginal_bc(), policy);

    const CMatrix lift_ab = tensor(sqrt_ab, identity(dc));
    const CMatrix lift_b = tensor(identity(da), tensor(inv_sqrt_b, identity(dc)));
    const CMatrix lift_bc = tensor(identity(da), sqrt_bc);

    MOperatorBundle b;
    b.m = lift_ab * lift_b * lift_bc;
    b.mm_dagger = b.m * b.m.adjoint();
    b.m_dagger_m = b.m.adjoint() * b.m;
    b.commutator = b.mm_dagger - b.m_dagger_m;
    b.commutator_trace_norm = trace_norm(b.commutator);
    return b;
}

CMatrix petz_map(const KrausChannel& phi, const CMatrix& sigma, const CMatrix& omega,
                 const SupportPolicy& policy) {
    if (sigma.rows() != phi.input_dim || sigma.cols() != phi.input_dim) {
        throw ShapeError("petz_map: sigma dimension does not match channel input");
    }
    if (omega.rows() != phi.output_dim || omega.cols() != phi.output_dim) {
        throw ShapeError("petz_map: omega dimension does not match channel output");
    }
    if (hermiticity_defect(omega) > 1e-10 * max_abs(omega)) {
        throw DomainError("petz_map: omega is not Hermitian within tolerance");
    }
    const CMatrix phi_sigma = phi.apply(sigma);
    const CMatrix norm = matrix_inv_sqrt(phi_sigma, policy);
    const CMatrix pulled = phi.apply_adjoint(norm * omega * norm);
    const CMatrix sqrt_sigma = matrix_sqrt(sigma, policy);
    return sqrt_sigma * pulled * sqrt_sigma;
}

SaturationResiduals saturation_residuals(const TripartiteState& s, const MOperatorBundle& bundle,
                                        const SupportPolicy& policy) {
    SaturationResiduals r;
    r.cmi = conditional_mutual_information(s, policy);
    r.dist_mm = trace_norm(s.rho - bundle.mm_dagger);
    r.dist_mdm = trace_norm(s.rho - bundle.m_dagger_m);
    return r;
}

}  // namespace markovscope
