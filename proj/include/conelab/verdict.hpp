// verdict.hpp — membership answers with machine-checkable certificates.

#pragma once

#include "conelab/bipartite.hpp"

#include <stdexcept>
#include <variant>

namespace conelab {

// Ordered along the inclusion chain Sep <= Dpsd <= Psd, PsdGamma <= Decomp <= Bpsd.
enum class ConeId { Sep, Dpsd, Psd, PsdGamma, Decomp, Bpsd };

enum class Status { In, Out, Inconclusive };

// v with v* X v < 0 (or v* X^G v < 0 when gamma is set).
struct NegEigenvector {
    Vector v;
    bool gamma = false;
    double value = 0.0;
};

// Product vector x (x) y with (x(x)y)* X (x(x)y) < 0.
struct ProductVectorWitness {
    Vector x;
    Vector y;
    double value = 0.0;
};

// X ~= X1 + X2 with X1 psd and X2 of psd partial transpose.
struct Decomposition {
    BipartiteOperator x1;
    BipartiteOperator x2;
};

// W psd with psd partial transpose, tr W = 1, <W, X> < 0.
struct DualWitness {
    BipartiteOperator w;
    double pairing = 0.0;
};

using Certificate =
    std::variant<std::monostate, NegEigenvector, ProductVectorWitness, Decomposition, DualWitness>;

struct Verdict {
    Status status = Status::Inconclusive;
    ConeId cone = ConeId::Psd;
    double residual = 0.0;
    Certificate certificate;

    bool in() const { return status == Status::In; }
    bool out() const { return status == Status::Out; }
};

struct ToleranceConfig {
    double psd_tol = 1e-9;
    double feas_tol = 1e-7;
    int max_iters = 5000;
    int multistarts = 32;
    int witness_iters = 2000;
    std::uint64_t seed = 1;

    void validate() const {
        if (psd_tol <= 0 || feas_tol <= 0 || max_iters <= 0 || multistarts <= 0 ||
            witness_iters <= 0)
            throw std::invalid_argument("ToleranceConfig: all fields must be positive");
    }
};

const char* to_string(Status s);
const char* to_string(ConeId c);
ConeId cone_from_string(const std::string& name);

}  // namespace conelab
