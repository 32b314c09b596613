#include "conelab/free_systems.hpp"

#include "conelab/random.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace conelab {

FreeSpectrahedron::FreeSpectrahedron(MatrixTuple coeffs, std::optional<RealVector> order_unit)
    : coeffs_(std::move(coeffs)), order_unit_(std::move(order_unit)) {
    const int d = coeffs_.length();
    const int r = coeffs_.level();

    // Linear independence through the Gram matrix of trace pairings.
    Matrix gram(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) gram(i, j) = trace_inner(coeffs_.entries[i], coeffs_.entries[j]);
    const Spectrum gs = eig_hermitian(HermitianMatrix::symmetrized(std::move(gram)));
    const double lam_max = gs.eigenvalues[d - 1];
    if (!(lam_max > 0.0) || gs.eigenvalues[0] < 1e-8 * lam_max)
        throw std::invalid_argument("FreeSpectrahedron: coefficients are not linearly independent");

    if (order_unit_) {
        if (order_unit_->size() != d)
            throw std::invalid_argument("FreeSpectrahedron: order unit has wrong length");
        Matrix sum = Matrix::Zero(r, r);
        for (int i = 0; i < d; ++i) sum += (*order_unit_)[i] * coeffs_.entries[i].mat();
        if ((sum - Matrix::Identity(r, r)).norm() > 1e-10)
            throw std::invalid_argument("FreeSpectrahedron: order unit identity fails");
    }
}

void PolyhedralCone::validate() const {
    if (dim < 1) throw std::invalid_argument("PolyhedralCone: dim must be >= 1");
    if (rays.empty() || dual_rays.empty())
        throw std::invalid_argument("PolyhedralCone: rays and dual rays must be nonempty");
    for (const auto& r : rays)
        if (r.size() != dim) throw std::invalid_argument("PolyhedralCone: ray dimension mismatch");
    for (const auto& l : dual_rays)
        if (l.size() != dim)
            throw std::invalid_argument("PolyhedralCone: dual ray dimension mismatch");
    if (order_unit.size() != dim)
        throw std::invalid_argument("PolyhedralCone: order unit dimension mismatch");
    for (const auto& r : rays)
        for (const auto& l : dual_rays)
            if (r.dot(l) < -1e-12 * std::max(1.0, r.norm() * l.norm()))
                throw std::invalid_argument("PolyhedralCone: a ray pairs negatively with a dual ray");
    for (const auto& l : dual_rays)
        if (order_unit.dot(l) <= 1e-9 * std::max(1.0, order_unit.norm() * l.norm()))
            throw std::invalid_argument("PolyhedralCone: order unit is not interior");
}

PolyhedralCone PolyhedralCone::simplex(int dim) {
    PolyhedralCone c;
    c.dim = dim;
    for (int i = 0; i < dim; ++i) {
        RealVector e = RealVector::Zero(dim);
        e[i] = 1.0;
        c.rays.push_back(e);
        c.dual_rays.push_back(e);
    }
    c.order_unit = RealVector::Ones(dim);
    c.validate();
    return c;
}

PolyhedralCone PolyhedralCone::square_cone() {
    PolyhedralCone c;
    c.dim = 3;
    for (const double sx : {1.0, -1.0})
        for (const double sy : {1.0, -1.0}) {
            RealVector r(3);
            r << sx, sy, 1.0;
            c.rays.push_back(r);
        }
    for (const double sx : {1.0, -1.0}) {
        RealVector l1(3), l2(3);
        l1 << sx, 0.0, 1.0;
        l2 << 0.0, sx, 1.0;
        c.dual_rays.push_back(l1);
        c.dual_rays.push_back(l2);
    }
    c.order_unit = RealVector::Zero(3);
    c.order_unit[2] = 1.0;
    c.validate();
    return c;
}

HermitianMatrix pairing_tuple(const MatrixTuple& b, const MatrixTuple& a) {
    if (b.length() != a.length())
        throw std::invalid_argument("pairing_tuple: tuple length mismatch");
    const int t = b.level();
    const int s = a.level();
    Matrix out = Matrix::Zero(t * s, t * s);
    for (int i = 0; i < b.length(); ++i) {
        const Matrix bt = b.entries[i].mat().transpose();
        const Matrix& ai = a.entries[i].mat();
        for (int r = 0; r < t; ++r)
            for (int c = 0; c < t; ++c) out.block(r * s, c * s, s, s) += bt(r, c) * ai;
    }
    return HermitianMatrix::symmetrized(std::move(out));
}

HermitianMatrix pairing_bipartite(const BipartiteOperator& b, const BipartiteOperator& a) {
    if (b.d() != a.d()) throw std::invalid_argument("pairing_bipartite: first factors differ");
    const int d = b.d();
    const int t = b.s();
    const int s = a.s();
    Matrix out = Matrix::Zero(t * s, t * s);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Matrix bt = b.block(i, j).transpose();
            const Matrix aj = a.block(j, i);
            for (int r = 0; r < t; ++r)
                for (int c = 0; c < t; ++c) out.block(r * s, c * s, s, s) += bt(r, c) * aj;
        }
    return HermitianMatrix::symmetrized(std::move(out));
}

bool member_free_spectrahedron(const FreeSpectrahedron& sp, const MatrixTuple& a, double psd_tol) {
    if (sp.tuple_length() != a.length())
        throw std::invalid_argument("member_free_spectrahedron: tuple length mismatch");
    const int r = sp.coeff_dim();
    const int s = a.level();
    Matrix sum = Matrix::Zero(r * s, r * s);
    for (int i = 0; i < a.length(); ++i) {
        const Matrix& bi = sp.coeffs().entries[i].mat();
        for (int p = 0; p < r; ++p)
            for (int q = 0; q < r; ++q) sum.block(p * s, q * s, s, s) += bi(p, q) * a.entries[i].mat();
    }
    return is_psd(HermitianMatrix::symmetrized(std::move(sum)), psd_tol);
}

std::vector<Matrix> kraus_from_psd(const BipartiteOperator& c, const ToleranceConfig& cfg) {
    if (!member_psd(c, cfg).in())
        throw std::invalid_argument("kraus_from_psd: input Choi matrix is not psd");
    const int d = c.d();
    const int s = c.s();
    const Spectrum spec = eig_hermitian(c.herm());
    const double cutoff = 1e-10 * norm_scale(c.frobenius());
    std::vector<Matrix> kraus;
    for (int k = 0; k < c.dim(); ++k) {
        const double lam = spec.eigenvalues[k];
        if (lam <= cutoff) continue;
        const double w = std::sqrt(lam);
        Matrix op(d, s);
        for (int i = 0; i < d; ++i)
            for (int a = 0; a < s; ++a) op(i, a) = w * std::conj(spec.eigenvectors(i * s + a, k));
        kraus.push_back(std::move(op));
    }
    return kraus;
}

bool member_cmax(const PolyhedralCone& c, const MatrixTuple& a, double psd_tol) {
    c.validate();
    if (a.length() != c.dim) throw std::invalid_argument("member_cmax: tuple length mismatch");
    const int s = a.level();
    for (const auto& l : c.dual_rays) {
        Matrix sum = Matrix::Zero(s, s);
        for (int i = 0; i < c.dim; ++i) sum += l[i] * a.entries[i].mat();
        if (!is_psd(HermitianMatrix::symmetrized(std::move(sum)), psd_tol)) return false;
    }
    return true;
}

namespace {

using Blocks = std::vector<HermitianMatrix>;

Blocks zero_blocks(int count, int s) {
    return Blocks(count, HermitianMatrix::zero(s));
}

// sum_k ray_k (x) P_k assembled at the tuple coordinates.
MatrixTuple assemble(const PolyhedralCone& c, const Blocks& blocks, int s) {
    std::vector<HermitianMatrix> coords(c.dim, HermitianMatrix::zero(s));
    for (size_t k = 0; k < blocks.size(); ++k)
        for (int i = 0; i < c.dim; ++i)
            coords[i] = coords[i] + blocks[k] * c.rays[k][i];
    return MatrixTuple::validated(std::move(coords));
}

double tuple_distance(const MatrixTuple& x, const MatrixTuple& y) {
    double sum = 0.0;
    for (int i = 0; i < x.length(); ++i) {
        const double n = (x.entries[i] - y.entries[i]).frobenius();
        sum += n * n;
    }
    return std::sqrt(sum);
}

double tuple_norm(const MatrixTuple& x) {
    double sum = 0.0;
    for (const auto& e : x.entries) sum += e.frobenius() * e.frobenius();
    return std::sqrt(sum);
}

// Pseudo-inverse of the real symmetric Gram matrix of the ray system.
RealMatrix ray_gram_pinv(const PolyhedralCone& c) {
    const int d = c.dim;
    const int m = static_cast<int>(c.rays.size());
    RealMatrix r(d, m);
    for (int k = 0; k < m; ++k) r.col(k) = c.rays[k];
    Matrix g = (r * r.transpose()).cast<Complex>();
    const Spectrum gs = eig_hermitian(HermitianMatrix::symmetrized(std::move(g)));
    const double lam_max = gs.eigenvalues[d - 1];
    RealMatrix pinv = RealMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        if (gs.eigenvalues[k] <= 1e-12 * std::max(1.0, lam_max)) continue;
        const RealVector v = gs.eigenvectors.col(k).real();
        pinv += (v * v.transpose()) / gs.eigenvalues[k];
    }
    return pinv;
}

}  // namespace

CminVerdict member_cmin(const PolyhedralCone& c, const MatrixTuple& a,
                        const ToleranceConfig& cfg) {
    c.validate();
    cfg.validate();
    if (a.length() != c.dim) throw std::invalid_argument("member_cmin: tuple length mismatch");
    const int s = a.level();
    const int m = static_cast<int>(c.rays.size());
    const double scale = norm_scale(tuple_norm(a));
    const double accept = cfg.feas_tol * scale;
    const RealMatrix gram_pinv = ray_gram_pinv(c);

    CminVerdict verdict;

    // Least-squares projection onto the affine set { P : sum_k R_ik P_k = A_i }.
    auto project_affine = [&](Blocks p) {
        std::vector<HermitianMatrix> defect(c.dim, HermitianMatrix::zero(s));
        for (int i = 0; i < c.dim; ++i) {
            HermitianMatrix acc = a.entries[i] * -1.0;
            for (int k = 0; k < m; ++k) acc = acc + p[k] * c.rays[k][i];
            defect[i] = acc;
        }
        std::vector<HermitianMatrix> corr(c.dim, HermitianMatrix::zero(s));
        for (int i = 0; i < c.dim; ++i)
            for (int j = 0; j < c.dim; ++j)
                if (gram_pinv(i, j) != 0.0) corr[i] = corr[i] + defect[j] * gram_pinv(i, j);
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < c.dim; ++i) p[k] = p[k] - corr[i] * c.rays[k][i];
        return p;
    };

    auto project_psd_blocks = [&](Blocks p) {
        for (auto& blk : p) blk = project_psd(blk);
        return p;
    };

    // Dykstra between the product psd cone and the affine constraint set;
    // the correction term is only needed on the non-affine side.
    Blocks x = project_affine(zero_blocks(m, s));
    Blocks corr = zero_blocks(m, s);
    double best_gap = std::numeric_limits<double>::infinity();
    std::deque<double> history;
    for (int it = 0; it < cfg.max_iters; ++it) {
        Blocks shifted(m, HermitianMatrix::zero(s));
        for (int k = 0; k < m; ++k) shifted[k] = x[k] + corr[k];
        const Blocks y = project_psd_blocks(shifted);
        for (int k = 0; k < m; ++k) corr[k] = shifted[k] - y[k];
        x = project_affine(y);

        const double resid = tuple_distance(assemble(c, y, s), a);
        best_gap = std::min(best_gap, resid);
        if (resid <= accept) {
            verdict.status = Status::In;
            verdict.residual = resid;
            verdict.decomposition = CminDecomposition{y};
            return verdict;
        }
        history.push_back(best_gap);
        if (history.size() > 100) {
            const double before = history.front();
            history.pop_front();
            if (before - best_gap < 1e-3 * accept && resid > 10.0 * accept) break;
        }
    }

    // Out: first try the cheap witnesses B_i = l_i v v* built from a dual ray
    // whose contraction has a negative eigenvector; the general engine below
    // projects -A onto { B : sum_i ray_i B_i psd for every ray }.
    auto make_ray_witness = [&](const RealVector& l) -> std::optional<CminDualWitness> {
        Matrix sum = Matrix::Zero(s, s);
        for (int i = 0; i < c.dim; ++i) sum += l[i] * a.entries[i].mat();
        const Spectrum spec = eig_hermitian(HermitianMatrix::symmetrized(std::move(sum)));
        if (spec.eigenvalues[0] >= -cfg.psd_tol * scale) return std::nullopt;
        const Vector v = spec.eigenvectors.col(0);
        std::vector<HermitianMatrix> coords;
        coords.reserve(c.dim);
        for (int i = 0; i < c.dim; ++i)
            coords.push_back(HermitianMatrix::symmetrized(l[i] * (v * v.adjoint())));
        MatrixTuple b = MatrixTuple::validated(std::move(coords));
        const double pairing = trace_inner(b, a);
        if (pairing >= -accept) return std::nullopt;
        return CminDualWitness{std::move(b), pairing};
    };
    for (const auto& l : c.dual_rays) {
        if (auto w = make_ray_witness(l)) {
            verdict.status = Status::Out;
            verdict.residual = w->pairing;
            verdict.witness = std::move(w);
            return verdict;
        }
    }

    auto contract_ray = [&](const MatrixTuple& b, const RealVector& r) {
        Matrix sum = Matrix::Zero(s, s);
        for (int i = 0; i < c.dim; ++i) sum += r[i] * b.entries[i].mat();
        return HermitianMatrix::symmetrized(std::move(sum));
    };

    // Exact projection onto { B : contract_ray(B, r) psd } for one ray.
    auto project_halfcone = [&](MatrixTuple b, const RealVector& r) {
        const HermitianMatrix contracted = contract_ray(b, r);
        const HermitianMatrix fixed = project_psd(contracted) - contracted;
        const double inv = 1.0 / r.squaredNorm();
        for (int i = 0; i < c.dim; ++i) b.entries[i] = b.entries[i] + fixed * (r[i] * inv);
        return b;
    };

    auto in_dual_cone = [&](const MatrixTuple& b, double tol) {
        for (const auto& r : c.rays)
            if (!is_psd(contract_ray(b, r), tol)) return false;
        return true;
    };

    auto polish_witness = [&](MatrixTuple b) -> std::optional<CminDualWitness> {
        for (int pass = 0; pass < 300 && !in_dual_cone(b, 0.25 * cfg.psd_tol); ++pass)
            for (const auto& r : c.rays) b = project_halfcone(b, r);
        const double norm = tuple_norm(b);
        if (norm < 1e-12) return std::nullopt;
        for (auto& e : b.entries) e = e * (1.0 / norm);
        if (!in_dual_cone(b, cfg.psd_tol)) return std::nullopt;
        const double pairing = trace_inner(b, a);
        if (pairing >= -accept) return std::nullopt;
        return CminDualWitness{std::move(b), pairing};
    };

    // General witness engine: cyclic Dykstra projection of -A onto the dual
    // cone. The Moreau decomposition makes that projection pair with A to
    // minus its squared norm, so it separates whenever A is infeasible.
    std::vector<HermitianMatrix> seed_coords;
    seed_coords.reserve(c.dim);
    for (int i = 0; i < c.dim; ++i) seed_coords.push_back(a.entries[i] * -1.0);
    MatrixTuple b = MatrixTuple::validated(std::move(seed_coords));
    std::vector<MatrixTuple> corrections(c.rays.size(), b);
    for (auto& corr : corrections)
        for (auto& e : corr.entries) e = HermitianMatrix::zero(s);
    MatrixTuple shadow = b;
    for (int it = 1; it <= cfg.witness_iters; ++it) {
        for (size_t k = 0; k < c.rays.size(); ++k) {
            MatrixTuple shifted = b;
            for (int i = 0; i < c.dim; ++i)
                shifted.entries[i] = b.entries[i] + corrections[k].entries[i];
            const MatrixTuple projected = project_halfcone(shifted, c.rays[k]);
            for (int i = 0; i < c.dim; ++i)
                corrections[k].entries[i] = shifted.entries[i] - projected.entries[i];
            b = projected;
        }
        const double move = tuple_distance(shadow, b);
        shadow = b;
        if (it % 50 == 0 || it == cfg.witness_iters || move < 1e-14) {
            if (auto w = polish_witness(b)) {
                verdict.status = Status::Out;
                verdict.residual = w->pairing;
                verdict.witness = std::move(w);
                return verdict;
            }
            if (move < 1e-14) break;
        }
    }

    verdict.status = Status::Inconclusive;
    verdict.residual = best_gap;
    return verdict;
}

bool verify_cmin_certificate(const PolyhedralCone& c, const MatrixTuple& a,
                             const CminVerdict& verdict, const ToleranceConfig& cfg) {
    const int s = a.level();
    const double scale = norm_scale(tuple_norm(a));
    if (verdict.status == Status::In && verdict.decomposition) {
        const auto& blocks = verdict.decomposition->blocks;
        if (blocks.size() != c.rays.size()) return false;
        for (const auto& blk : blocks)
            if (!is_psd(blk, cfg.psd_tol)) return false;
        return tuple_distance(assemble(c, blocks, s), a) <= cfg.feas_tol * scale;
    }
    if (verdict.status == Status::Out && verdict.witness) {
        const MatrixTuple& b = verdict.witness->b;
        if (b.length() != c.dim) return false;
        for (const auto& r : c.rays) {
            Matrix sum = Matrix::Zero(s, s);
            for (int i = 0; i < c.dim; ++i) sum += r[i] * b.entries[i].mat();
            if (!is_psd(HermitianMatrix::symmetrized(std::move(sum)), cfg.psd_tol)) return false;
        }
        return trace_inner(b, a) < 0.0;
    }
    return false;
}

std::optional<MinMaxGap> find_cmax_cmin_gap(const PolyhedralCone& c, int level,
                                            const ToleranceConfig& cfg, int attempts) {
    c.validate();
    std::vector<HermitianMatrix> unit_coords;
    unit_coords.reserve(c.dim);
    for (int i = 0; i < c.dim; ++i)
        unit_coords.push_back(HermitianMatrix::identity(level) * c.order_unit[i]);
    const MatrixTuple base = MatrixTuple::validated(std::move(unit_coords));

    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<HermitianMatrix> dir_coords;
        dir_coords.reserve(c.dim);
        for (int i = 0; i < c.dim; ++i)
            dir_coords.push_back(
                random_hermitian(level, Rng::derive_seed(cfg.seed, 0xCAFE + 64 * attempt + i)));
        MatrixTuple dir = MatrixTuple::validated(std::move(dir_coords));
        const double norm = tuple_norm(dir);
        for (auto& e : dir.entries) e = e * (1.0 / norm);

        auto along = [&](double lam) {
            std::vector<HermitianMatrix> coords;
            coords.reserve(c.dim);
            for (int i = 0; i < c.dim; ++i)
                coords.push_back(base.entries[i] + dir.entries[i] * lam);
            return MatrixTuple::validated(std::move(coords));
        };

        double lo = 0.0, hi = 1.0;
        int doublings = 0;
        while (member_cmax(c, along(hi), cfg.psd_tol) && doublings++ < 60) {
            lo = hi;
            hi *= 2.0;
        }
        if (doublings >= 60) continue;  // recessive direction, stays inside
        for (int step = 0; step < 60; ++step) {
            const double mid = 0.5 * (lo + hi);
            (member_cmax(c, along(mid), cfg.psd_tol) ? lo : hi) = mid;
        }

        // The gap band hugs the max-system boundary, so step back only a
        // little and retreat further if the witness search cannot decide.
        for (const double pullback : {0.99, 0.97, 0.94, 0.9}) {
            const MatrixTuple candidate = along(pullback * lo);
            if (!member_cmax(c, candidate, cfg.psd_tol)) continue;
            ToleranceConfig search_cfg = cfg;
            search_cfg.seed = Rng::derive_seed(cfg.seed, 0x6A9 + 8 * attempt);
            const CminVerdict verdict = member_cmin(c, candidate, search_cfg);
            if (verdict.status == Status::In) break;  // already back inside C^min
            if (verdict.status == Status::Out && verdict.witness &&
                verify_cmin_certificate(c, candidate, verdict, search_cfg))
                return MinMaxGap{candidate, *verdict.witness};
        }
    }
    return std::nullopt;
}

BipartiteOperator lift(const BipartiteOperator& m, int d, int s) {
    if (m.d() != 2 || m.s() != 2) throw std::invalid_argument("lift: input must be a (2,2) operator");
    if (d < 2 || s < 2) throw std::invalid_argument("lift: need d >= 2 and s >= 2");
    Matrix out = Matrix::Zero(d * s, d * s);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block(i * s, j * s, 2, 2) = m.block(i, j);
    return BipartiteOperator(d, s, HermitianMatrix::symmetrized(std::move(out)));
}

}  // namespace conelab
