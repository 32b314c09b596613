#include "conelab/cone_oracles.hpp"

#include "conelab/random.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>

namespace conelab {

const char* to_string(Status s) {
    switch (s) {
        case Status::In: return "in";
        case Status::Out: return "out";
        case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(ConeId c) {
    switch (c) {
        case ConeId::Sep: return "sep";
        case ConeId::Dpsd: return "dpsd";
        case ConeId::Psd: return "psd";
        case ConeId::PsdGamma: return "ppt";
        case ConeId::Decomp: return "decomp";
        case ConeId::Bpsd: return "bpsd";
    }
    return "?";
}

ConeId cone_from_string(const std::string& name) {
    if (name == "sep") return ConeId::Sep;
    if (name == "dpsd") return ConeId::Dpsd;
    if (name == "psd") return ConeId::Psd;
    if (name == "ppt") return ConeId::PsdGamma;
    if (name == "decomp") return ConeId::Decomp;
    if (name == "bpsd") return ConeId::Bpsd;
    throw std::invalid_argument("unknown cone: " + name);
}

namespace {

BipartiteOperator bp(const BipartiteOperator& like, HermitianMatrix h) {
    return BipartiteOperator(like.d(), like.s(), std::move(h));
}

BipartiteOperator project_psd_bp(const BipartiteOperator& x) {
    return bp(x, project_psd(x.herm()));
}

// Projection onto {Y : Y^G psd}; the partial transpose is an isometry.
BipartiteOperator project_gamma_psd_bp(const BipartiteOperator& x) {
    return partial_transpose(project_psd_bp(partial_transpose(x)));
}

double product_form_value(const BipartiteOperator& x, const Vector& u, const Vector& v) {
    Vector prod(x.dim());
    for (int i = 0; i < x.d(); ++i) prod.segment(i * x.s(), x.s()) = u[i] * v;
    return (prod.adjoint() * x.mat() * prod)(0, 0).real();
}

BipartiteOperator product_state(const BipartiteOperator& like, const Vector& u, const Vector& v) {
    Vector prod(like.dim());
    for (int i = 0; i < like.d(); ++i) prod.segment(i * like.s(), like.s()) = u[i] * v;
    return bp(like, HermitianMatrix::symmetrized(prod * prod.adjoint()));
}

Verdict psd_verdict(const BipartiteOperator& x, ConeId cone, bool gamma,
                    const ToleranceConfig& cfg) {
    const Spectrum spec = eig_hermitian(x.herm());
    const double lam = spec.eigenvalues[0];
    Verdict v;
    v.cone = cone;
    v.residual = lam;
    if (lam >= -cfg.psd_tol * norm_scale(x.frobenius())) {
        v.status = Status::In;
    } else {
        v.status = Status::Out;
        v.certificate = NegEigenvector{spec.eigenvectors.col(0), gamma, lam};
    }
    return v;
}

// Feasibility of X = X1 + X2 over (psd, psd-partial-transpose) by Dykstra
// alternating projections. Returns the certificate when the primal gap drops
// below feas_tol * max(1, ||X||_F), otherwise the best gap reached.
struct PrimalResult {
    std::optional<Decomposition> decomposition;
    double best_gap = std::numeric_limits<double>::infinity();
};

PrimalResult decomp_primal(const BipartiteOperator& x, const ToleranceConfig& cfg) {
    const double accept = cfg.feas_tol * norm_scale(x.frobenius());
    PrimalResult res;
    std::deque<double> history;

    // Plateau: no meaningful progress over the last 100 iterations means the
    // sets are (numerically) disjoint; hand over to the dual search.
    auto plateaued = [&](double gap) {
        history.push_back(res.best_gap);
        if (history.size() <= 100) return false;
        const double before = history.front();
        history.pop_front();
        return before - res.best_gap < 1e-3 * accept && gap > 10.0 * accept;
    };

    if (partial_transpose(x).bitwise_equal(x)) {
        // A partial-transpose-invariant X is decomposable iff X = A + A^G for
        // a single psd A (symmetrize any split). Alternating projections
        // between the psd cone and that affine subspace converge far faster
        // than the two-cone splitting.
        BipartiteOperator a = x * 0.5;
        for (int it = 0; it < cfg.max_iters; ++it) {
            const BipartiteOperator part = project_psd_bp(a);
            const BipartiteOperator defect = part + partial_transpose(part) - x;
            const double gap = defect.frobenius();
            res.best_gap = std::min(res.best_gap, gap);
            if (gap <= accept) {
                res.decomposition = Decomposition{part, partial_transpose(part)};
                return res;
            }
            if (plateaued(gap)) break;
            a = part - defect * 0.5;
        }
        return res;
    }

    BipartiteOperator cur = x;
    BipartiteOperator p = BipartiteOperator::zero(x.d(), x.s());
    BipartiteOperator q = p;
    for (int it = 0; it < cfg.max_iters; ++it) {
        const BipartiteOperator y = project_psd_bp(cur + p);
        p = cur + p - y;
        const BipartiteOperator z = y + q;
        const BipartiteOperator x2 = project_gamma_psd_bp(x - z);
        cur = x - x2;
        q = z - cur;

        const double gap = (x - y - x2).frobenius();
        res.best_gap = std::min(res.best_gap, gap);
        if (gap <= accept) {
            res.decomposition = Decomposition{y, x2};
            return res;
        }
        if (plateaued(gap)) break;
    }
    return res;
}

// Pull an iterate into the doubly positive cone by alternating projections,
// then normalize the trace. Returns nothing when the candidate collapses.
std::optional<BipartiteOperator> polish_dpsd_unit_trace(BipartiteOperator w,
                                                        const ToleranceConfig& cfg) {
    for (int pass = 0; pass < 300; ++pass) {
        const double scale = norm_scale(w.frobenius());
        const double lam_direct = min_eigenvalue(w.herm());
        if (lam_direct < -0.25 * cfg.psd_tol * scale) {
            w = project_psd_bp(w);
            continue;
        }
        const double lam_gamma = min_eigenvalue(partial_transpose(w).herm());
        if (lam_gamma < -0.25 * cfg.psd_tol * scale) {
            w = project_gamma_psd_bp(w);
            continue;
        }
        break;
    }
    const double tr = w.trace();
    if (!(tr > 1e-9)) return std::nullopt;
    w = w * (1.0 / tr);
    const double scale = norm_scale(w.frobenius());
    if (min_eigenvalue(w.herm()) < -cfg.psd_tol * scale) return std::nullopt;
    if (min_eigenvalue(partial_transpose(w).herm()) < -cfg.psd_tol * scale) return std::nullopt;
    return w;
}

// Search for W in the unit-trace doubly positive spectrahedron with
// <W, X> < -feas_tol * max(1, ||X||_F). Product states from the see-saw give
// the cheap candidates. The general engine projects -X onto the doubly
// positive cone: by the Moreau decomposition that projection pairs with X to
// minus its squared norm, so it separates whenever X is not decomposable.
std::optional<DualWitness> decomp_dual_witness(const BipartiteOperator& x,
                                               const ToleranceConfig& cfg) {
    const double needed = -cfg.feas_tol * norm_scale(x.frobenius());

    const ProductVectorWitness ps = seesaw_min_product(x, cfg);
    if (ps.value < needed) {
        const BipartiteOperator w = product_state(x, ps.x, ps.y);
        const double pairing = trace_inner(w, x);
        if (pairing < needed) return DualWitness{w, pairing};
    }

    auto try_candidate = [&](const BipartiteOperator& cand) -> std::optional<DualWitness> {
        const auto polished = polish_dpsd_unit_trace(cand, cfg);
        if (!polished) return std::nullopt;
        const double pairing = trace_inner(*polished, x);
        if (pairing < needed) return DualWitness{*polished, pairing};
        return std::nullopt;
    };

    BipartiteOperator cur = x * -1.0;
    BipartiteOperator p = BipartiteOperator::zero(x.d(), x.s());
    BipartiteOperator q = p;
    BipartiteOperator shadow = cur;
    for (int it = 1; it <= cfg.witness_iters; ++it) {
        const BipartiteOperator y = project_psd_bp(cur + p);
        p = cur + p - y;
        cur = project_gamma_psd_bp(y + q);
        q = y + q - cur;
        const double move = (shadow - cur).frobenius();
        shadow = cur;
        if (it % 50 == 0 || it == cfg.witness_iters || move < 1e-14) {
            if (cur.trace() > 1e-12) {
                if (auto found = try_candidate(cur)) return found;
            }
            if (move < 1e-14) break;  // converged; nothing left to separate with
        }
    }
    return std::nullopt;
}

}  // namespace

Verdict member_psd(const BipartiteOperator& x, const ToleranceConfig& cfg) {
    cfg.validate();
    return psd_verdict(x, ConeId::Psd, false, cfg);
}

Verdict member_ppt(const BipartiteOperator& x, const ToleranceConfig& cfg) {
    cfg.validate();
    return psd_verdict(partial_transpose(x), ConeId::PsdGamma, true, cfg);
}

Verdict member_dpsd(const BipartiteOperator& x, const ToleranceConfig& cfg) {
    cfg.validate();
    Verdict direct = member_psd(x, cfg);
    if (direct.out()) {
        direct.cone = ConeId::Dpsd;
        return direct;
    }
    Verdict gamma = member_ppt(x, cfg);
    gamma.cone = ConeId::Dpsd;
    gamma.residual = std::min(direct.residual, gamma.residual);
    return gamma;
}

Verdict member_decomp(const BipartiteOperator& x, const ToleranceConfig& cfg) {
    cfg.validate();
    Verdict v;
    v.cone = ConeId::Decomp;

    if (member_psd(x, cfg).in()) {
        v.status = Status::In;
        v.residual = 0.0;
        v.certificate = Decomposition{x, BipartiteOperator::zero(x.d(), x.s())};
        return v;
    }
    if (member_ppt(x, cfg).in()) {
        v.status = Status::In;
        v.residual = 0.0;
        v.certificate = Decomposition{BipartiteOperator::zero(x.d(), x.s()), x};
        return v;
    }

    const PrimalResult primal = decomp_primal(x, cfg);
    if (primal.decomposition) {
        const Decomposition& dec = *primal.decomposition;
        const double scale = norm_scale(x.frobenius());
        if (min_eigenvalue(dec.x1.herm()) >= -cfg.psd_tol * scale &&
            min_eigenvalue(partial_transpose(dec.x2).herm()) >= -cfg.psd_tol * scale) {
            v.status = Status::In;
            v.residual = (x - dec.x1 - dec.x2).frobenius();
            v.certificate = dec;
            return v;
        }
    }

    if (auto witness = decomp_dual_witness(x, cfg)) {
        v.status = Status::Out;
        v.residual = witness->pairing;
        v.certificate = *witness;
        return v;
    }

    v.status = Status::Inconclusive;
    v.residual = primal.best_gap;
    return v;
}

Verdict member_bpsd(const BipartiteOperator& x, const ToleranceConfig& cfg) {
    cfg.validate();
    Verdict v;
    v.cone = ConeId::Bpsd;

    const ProductVectorWitness best = seesaw_min_product(x, cfg);
    if (best.value < -cfg.psd_tol * norm_scale(x.frobenius())) {
        v.status = Status::Out;
        v.residual = best.value;
        v.certificate = best;
        return v;
    }

    Verdict dec = member_decomp(x, cfg);
    if (dec.in()) {
        v.status = Status::In;
        v.residual = dec.residual;
        v.certificate = dec.certificate;
        return v;
    }

    v.status = Status::Inconclusive;
    v.residual = best.value;
    return v;
}

Verdict member_sep_small(const BipartiteOperator& x, const ToleranceConfig& cfg) {
    cfg.validate();
    if (x.dim() > 6)
        throw std::invalid_argument(
            "member_sep_small: only supported for d*s <= 6, where the partial "
            "transpose criterion is exact");
    Verdict v = member_dpsd(x, cfg);
    v.cone = ConeId::Sep;
    return v;
}

Verdict member(ConeId cone, const BipartiteOperator& x, const ToleranceConfig& cfg) {
    switch (cone) {
        case ConeId::Sep: return member_sep_small(x, cfg);
        case ConeId::Dpsd: return member_dpsd(x, cfg);
        case ConeId::Psd: return member_psd(x, cfg);
        case ConeId::PsdGamma: return member_ppt(x, cfg);
        case ConeId::Decomp: return member_decomp(x, cfg);
        case ConeId::Bpsd: return member_bpsd(x, cfg);
    }
    throw std::logic_error("member: unknown cone");
}

namespace {

// Indices of the first/second factor coordinates that actually carry weight.
// Zero-padded rows (lifted operators) otherwise trap the see-saw on the flat
// zero face of the product form.
struct SupportIndices {
    std::vector<int> first;
    std::vector<int> second;
};

SupportIndices operator_support(const BipartiteOperator& x) {
    const int d = x.d();
    const int s = x.s();
    const double tol = 1e-14 * norm_scale(x.frobenius());
    SupportIndices sup;
    for (int i = 0; i < d; ++i) {
        double weight = 0.0;
        for (int j = 0; j < d; ++j) weight += x.block(i, j).norm();
        if (weight > tol) sup.first.push_back(i);
    }
    for (int a = 0; a < s; ++a) {
        double weight = 0.0;
        for (int i = 0; i < d; ++i) weight += x.mat().row(i * s + a).norm();
        if (weight > tol) sup.second.push_back(a);
    }
    return sup;
}

}  // namespace

ProductVectorWitness seesaw_min_product(const BipartiteOperator& x, const ToleranceConfig& cfg) {
    cfg.validate();

    const SupportIndices sup = operator_support(x);
    const int full_d = x.d();
    const int full_s = x.s();
    if (sup.first.empty() || sup.second.empty()) {
        ProductVectorWitness trivial;
        trivial.x = Vector::Unit(full_d, 0);
        trivial.y = Vector::Unit(full_s, 0);
        trivial.value = 0.0;
        return trivial;
    }
    if (static_cast<int>(sup.first.size()) < full_d ||
        static_cast<int>(sup.second.size()) < full_s) {
        const int dc = static_cast<int>(sup.first.size());
        const int sc = static_cast<int>(sup.second.size());
        Matrix compressed = Matrix::Zero(dc * sc, dc * sc);
        for (int i = 0; i < dc; ++i)
            for (int j = 0; j < dc; ++j) {
                const Matrix blk = x.block(sup.first[i], sup.first[j]);
                for (int a = 0; a < sc; ++a)
                    for (int b = 0; b < sc; ++b)
                        compressed(i * sc + a, j * sc + b) = blk(sup.second[a], sup.second[b]);
            }
        const BipartiteOperator core(dc, sc, HermitianMatrix::symmetrized(std::move(compressed)));
        ProductVectorWitness inner = seesaw_min_product(core, cfg);
        ProductVectorWitness padded;
        padded.x = Vector::Zero(full_d);
        padded.y = Vector::Zero(full_s);
        for (int i = 0; i < dc; ++i) padded.x[sup.first[i]] = inner.x[i];
        for (int a = 0; a < sc; ++a) padded.y[sup.second[a]] = inner.y[a];
        padded.value = inner.value;
        return padded;
    }

    const int d = full_d;
    const int s = full_s;

    ProductVectorWitness best;
    best.value = std::numeric_limits<double>::infinity();

    for (int start = 0; start < cfg.multistarts; ++start) {
        Rng rng(Rng::derive_seed(cfg.seed, 0xB5D0'0000ULL + start));
        Vector u = random_unit_vector(d, rng);
        Vector v = random_unit_vector(s, rng);
        double value = product_form_value(x, u, v);
        for (int sweep = 0; sweep < 80; ++sweep) {
            // Fix u: the form in v is the contracted s x s matrix.
            Matrix b = Matrix::Zero(s, s);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) b += std::conj(u[i]) * u[j] * x.block(i, j);
            const Spectrum sb = eig_hermitian(HermitianMatrix::symmetrized(std::move(b)));
            v = sb.eigenvectors.col(0);

            // Fix v: contract to a d x d matrix.
            Matrix a(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) a(i, j) = (v.adjoint() * x.block(i, j) * v)(0, 0);
            const Spectrum sa = eig_hermitian(HermitianMatrix::symmetrized(std::move(a)));
            u = sa.eigenvectors.col(0);

            const double next = sa.eigenvalues[0];
            if (value - next < 1e-14 * norm_scale(x.frobenius())) {
                value = next;
                break;
            }
            value = next;
        }
        if (value < best.value) best = ProductVectorWitness{u, v, value};
    }
    return best;
}

bool verify_certificate(const BipartiteOperator& x, const Verdict& verdict,
                        const ToleranceConfig& cfg) {
    cfg.validate();
    const double scale = norm_scale(x.frobenius());

    if (std::holds_alternative<std::monostate>(verdict.certificate)) {
        if (verdict.status == Status::Inconclusive) return true;
        const bool want_in = verdict.in();
        switch (verdict.cone) {
            case ConeId::Psd: return is_psd(x.herm(), cfg.psd_tol) == want_in;
            case ConeId::PsdGamma:
                return is_psd(partial_transpose(x).herm(), cfg.psd_tol) == want_in;
            case ConeId::Sep:
            case ConeId::Dpsd:
                return (is_psd(x.herm(), cfg.psd_tol) &&
                        is_psd(partial_transpose(x).herm(), cfg.psd_tol)) == want_in;
            default: return false;  // heuristic cones always carry witnesses
        }
    }

    if (const auto* neg = std::get_if<NegEigenvector>(&verdict.certificate)) {
        if (neg->v.size() != x.dim()) return false;
        const BipartiteOperator target = neg->gamma ? partial_transpose(x) : x;
        const double q = (neg->v.adjoint() * target.mat() * neg->v)(0, 0).real();
        return q < 0.0;
    }

    if (const auto* pv = std::get_if<ProductVectorWitness>(&verdict.certificate)) {
        if (pv->x.size() != x.d() || pv->y.size() != x.s()) return false;
        const double q = product_form_value(x, pv->x, pv->y);
        return q < 0.0 && std::abs(q - pv->value) <= 1e-6 * scale;
    }

    if (const auto* dec = std::get_if<Decomposition>(&verdict.certificate)) {
        if (dec->x1.d() != x.d() || dec->x1.s() != x.s()) return false;
        if (dec->x2.d() != x.d() || dec->x2.s() != x.s()) return false;
        if (!is_psd(dec->x1.herm(), cfg.psd_tol)) return false;
        if (!is_psd(partial_transpose(dec->x2).herm(), cfg.psd_tol)) return false;
        return (x - dec->x1 - dec->x2).frobenius() <= cfg.feas_tol * scale;
    }

    if (const auto* dw = std::get_if<DualWitness>(&verdict.certificate)) {
        if (dw->w.d() != x.d() || dw->w.s() != x.s()) return false;
        if (!is_psd(dw->w.herm(), cfg.psd_tol)) return false;
        if (!is_psd(partial_transpose(dw->w).herm(), cfg.psd_tol)) return false;
        if (std::abs(dw->w.trace() - 1.0) > 1e-9) return false;
        const double pairing = trace_inner(dw->w, x);
        return pairing < 0.0 && std::abs(pairing - dw->pairing) <= 1e-6 * scale;
    }

    return false;
}

}  // namespace conelab
