// slice.hpp — the two-parameter slice family M(a,b), exact region
// classification against the defining polynomials, an independent quartic
// brute-force positivity oracle, the closed-form psd slice, grid scans, and
// the non-exposed-face / not-basic-closed hypothesis checks.

#pragma once

#include "conelab/cone_oracles.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace conelab {

struct SlicePoint {
    double a = 0.0;
    double b = 0.0;
};

enum class RegionLabel { InS1, InS2Only, Outside, BoundaryBand };

const char* to_string(RegionLabel label);
inline bool region_contains(RegionLabel label) {
    return label == RegionLabel::InS1 || label == RegionLabel::InS2Only;
}

// Boundary polynomials of the region: p1 = 1+2a+a^2-b, p2 = 1-2a+a^2-b,
// p3 = b, and the discriminant D = (b+1-a^2)^2 - 4b = p1*p2.
double poly_p1(SlicePoint p);
double poly_p2(SlicePoint p);
double poly_p3(SlicePoint p);
double region_discriminant(SlicePoint p);

// The 4x4 operator
//   [ 1    0    0    a/4 ]
//   [ 0    1/4  a/4  0   ]
//   [ 0    a/4  b    0   ]
//   [ a/4  0    0    1/4 ]
// as a (2,2) bipartite operator; real symmetric and invariant under the
// partial transpose.
BipartiteOperator slice_matrix(SlicePoint p);

// Classification with band width 1e-9 on the raw polynomial values. The
// region is closed, so equalities count as membership; points where the
// discriminant vanishes together with an active S2 constraint (the corners
// (+-1, 0)) are attributed to S2, all other discriminant-zero points to S1.
// BoundaryBand marks points just outside that would enter under a 10x wider
// band.
RegionLabel exact_region(SlicePoint p);

// Independent positivity oracle for the slice form: minimizes the reduced
// quartic r^4 + (b+1-a^2) r^2 + b exactly via the vertex of its quadratic in
// s = r^2, and cross-checks against a dense eigenvalue grid in r plus the
// determinant identity det = quartic/4. Internal disagreement throws.
bool brute_force_region(SlicePoint p, int grid_n);

// Closed form for slice_matrix(p) psd: |a| <= 2 and b >= a^2/4.
bool psd_slice(SlicePoint p);

struct ScanGrid {
    double a_min = -5.0, a_max = 5.0;
    double b_min = -1.0, b_max = 11.0;
    int na = 201, nb = 241;

    void validate() const;
    SlicePoint point(int i, int j) const;  // i indexes a, j indexes b
};

enum class ScanStatus { In, Out, Inconclusive, Band };
const char* to_string(ScanStatus s);

struct ScanRow {
    double a = 0.0, b = 0.0;
    RegionLabel region = RegionLabel::Outside;
    bool psd_slice_flag = false;
    ScanStatus psd = ScanStatus::Out;
    ScanStatus ppt = ScanStatus::Out;
    ScanStatus decomp = ScanStatus::Inconclusive;
    double decomp_residual = 0.0;
    bool brute_force_flag = false;
};

// Row-major over (a, b); deterministic for a fixed seed and any thread count.
std::vector<ScanRow> scan(const ScanGrid& grid, const ToleranceConfig& cfg, int threads = 1);

// Columns: a,b,region,psd_slice,psd,ppt,decomp,decomp_residual,brute_force
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);

struct CheckItem {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Report {
    bool passed = false;
    std::vector<CheckItem> items;

    void add(std::string name, bool ok, std::string detail);
};

// Certifies the non-exposed face at (+-1, 0): exact boundary gradients
// (0, -1), containment of the segment {(t,0) : |t| <= 1} at 201 samples, and
// a 360-direction supporting-functional test over a fine rasterization of the
// region boundary inside the default window.
Report nonexposed_check();

// Certifies the not-basic-closed hypothesis at (0.5, 2.25): the point lies on
// the zero set of p1 with nonzero gradient, its four axis neighbours at 1e-3
// lie in the region, and p1*p2 equals the discriminant at 100 random points.
Report basic_closed_hypothesis_check();

// member_decomp status of M(a,b) versus its (d,s) lift, point by point.
Report lift_equivalence_check(const std::vector<SlicePoint>& points, int d, int s,
                              const ToleranceConfig& cfg);

}  // namespace conelab
