// conelab — membership oracles, slice scans and verification for cones of
// bipartite Hermitian operators.
//
// Exit codes: 0 success/in, 1 out, 2 inconclusive, 3 input error,
// 4 verification failure.

#include "conelab/acceptance.hpp"
#include "conelab/json_io.hpp"
#include "conelab/random.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace {

using namespace conelab;

constexpr int kExitIn = 0;
constexpr int kExitOut = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInputError = 3;
constexpr int kExitVerifyFailure = 4;

int exit_code_for(Status s) {
    switch (s) {
        case Status::In: return kExitIn;
        case Status::Out: return kExitOut;
        case Status::Inconclusive: return kExitInconclusive;
    }
    return kExitInputError;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CONELAB_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
    }
    return 1;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

Json slice_summary(SlicePoint p, const ToleranceConfig& cfg) {
    const BipartiteOperator m = slice_matrix(p);
    const Verdict psd = member_psd(m, cfg);
    const Verdict ppt = member_ppt(m, cfg);
    const Verdict dec = member_decomp(m, cfg);
    return Json{{"a", p.a},
                {"b", p.b},
                {"region", to_string(exact_region(p))},
                {"psd_slice", psd_slice(p)},
                {"psd", to_string(psd.status)},
                {"ppt", to_string(ppt.status)},
                {"decomp", to_string(dec.status)},
                {"decomp_residual", dec.residual},
                {"brute_force", brute_force_region(p, 128)}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conelab: membership oracles and certificates for cones of "
                 "bipartite Hermitian operators"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::uint64_t seed = default_seed();
    int threads = 0;
    double psd_tol = 1e-9;
    app.add_option("--seed", seed, "random seed (env CONELAB_SEED as fallback)");
    app.add_option("--threads", threads, "worker threads, 0 = auto");
    app.add_option("--tol", psd_tol, "psd tolerance (relative)");

    // membership
    auto* membership = app.add_subcommand("membership", "decide cone membership");
    std::string cone_name;
    std::string input_path;
    std::vector<double> slice_args;
    membership->add_option("--cone", cone_name, "sep|dpsd|psd|ppt|decomp|bpsd")->required();
    membership->add_option("--input", input_path, "bipartite operator JSON file");
    membership->add_option("--slice", slice_args, "build the operator from slice parameters a b")
        ->expected(2);

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "grid scan of the slice family to CSV");
    std::vector<double> grid_args;
    std::string out_path;
    scan_cmd->add_option("--grid", grid_args, "AMIN AMAX BMIN BMAX NA NB")->expected(6);
    scan_cmd->add_option("--out", out_path, "output CSV path")->required();

    // slice
    auto* slice_cmd = app.add_subcommand("slice", "classify one slice point");
    double slice_a = 0.0, slice_b = 0.0;
    slice_cmd->add_option("a", slice_a, "first parameter")->required();
    slice_cmd->add_option("b", slice_b, "second parameter")->required();

    // duality
    auto* duality_cmd = app.add_subcommand("duality", "batch free-duality pairing tests");
    int duality_count = 200;
    duality_cmd->add_option("--count", duality_count, "number of sampled pairs");

    // kraus
    auto* kraus_cmd = app.add_subcommand("kraus", "Kraus operators of a psd Choi matrix");
    std::string kraus_input, kraus_out;
    kraus_cmd->add_option("--input", kraus_input, "bipartite operator JSON file")->required();
    kraus_cmd->add_option("--out", kraus_out, "output JSON path (stdout when omitted)");

    // liftcheck
    auto* lift_cmd = app.add_subcommand("liftcheck", "decomposability of slice points vs lifts");
    int lift_d = 3, lift_s = 3;
    std::string lift_points_path;
    lift_cmd->add_option("--d", lift_d, "first factor dimension of the lift");
    lift_cmd->add_option("--s", lift_s, "second factor dimension of the lift");
    lift_cmd->add_option("--points", lift_points_path, "JSON array of [a, b] pairs")->required();

    // minmax
    auto* minmax_cmd = app.add_subcommand("minmax", "min/max system oracles over a cone");
    std::string minmax_cone_path;
    int minmax_count = 100;
    int minmax_level = 2;
    minmax_cmd->add_option("--input", minmax_cone_path, "polyhedral cone JSON file")->required();
    minmax_cmd->add_option("--count", minmax_count, "sampled elements / search attempts");
    minmax_cmd->add_option("--level", minmax_level, "matrix level of the sampled elements");

    // verify
    app.add_subcommand("verify", "run the full acceptance suite");

    CLI11_PARSE(app, argc, argv);

    ToleranceConfig cfg;
    cfg.psd_tol = psd_tol;
    cfg.seed = seed;
    const int nthreads = resolve_threads(threads);

    try {
        if (membership->parsed()) {
            std::optional<BipartiteOperator> x;
            if (!slice_args.empty())
                x = slice_matrix({slice_args[0], slice_args[1]});
            else if (!input_path.empty())
                x = bipartite_from_json(load_json_file(input_path));
            else {
                std::cerr << "membership: need --input or --slice\n";
                return kExitInputError;
            }
            const Verdict v = member(cone_from_string(cone_name), *x, cfg);
            std::cout << verdict_to_json(v).dump(2) << "\n";
            return exit_code_for(v.status);
        }

        if (scan_cmd->parsed()) {
            ScanGrid grid;
            if (!grid_args.empty()) {
                grid.a_min = grid_args[0];
                grid.a_max = grid_args[1];
                grid.b_min = grid_args[2];
                grid.b_max = grid_args[3];
                grid.na = static_cast<int>(grid_args[4]);
                grid.nb = static_cast<int>(grid_args[5]);
            }
            grid.validate();
            const auto rows = scan(grid, cfg, nthreads);
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "cannot write " << out_path << "\n";
                return kExitInputError;
            }
            write_scan_csv(out, rows);
            std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
            return kExitIn;
        }

        if (slice_cmd->parsed()) {
            std::cout << slice_summary({slice_a, slice_b}, cfg).dump(2) << "\n";
            return kExitIn;
        }

        if (duality_cmd->parsed()) {
            Rng rng(seed);
            int self_bad = 0, sep_bad = 0;
            for (int trial = 0; trial < duality_count; ++trial) {
                const int d = 2 + static_cast<int>(rng.uniform() * 2.0);
                const int s = 2 + static_cast<int>(rng.uniform() * 2.0);
                const int t = 2 + static_cast<int>(rng.uniform() * 2.0);
                const BipartiteOperator a(d, s,
                                          random_psd(d * s, Rng::derive_seed(seed, 2 * trial)));
                const BipartiteOperator b(
                    d, t, random_psd(d * t, Rng::derive_seed(seed, 2 * trial + 1)));
                const HermitianMatrix pair = pairing_bipartite(b, a);
                if (min_eigenvalue(pair) < -1e-9 * norm_scale(pair.frobenius())) ++self_bad;

                SlicePoint p;
                do {
                    p = SlicePoint{-5.0 + 10.0 * rng.uniform(), -1.0 + 12.0 * rng.uniform()};
                } while (!region_contains(exact_region(p)));
                const BipartiteOperator sep =
                    random_separable(2, s, 1 + trial % 3, Rng::derive_seed(seed, 0x5E00 + trial));
                const HermitianMatrix cross = pairing_bipartite(sep, slice_matrix(p));
                if (min_eigenvalue(cross) < -1e-9 * norm_scale(cross.frobenius())) ++sep_bad;
            }
            const bool ok = self_bad == 0 && sep_bad == 0;
            std::cout << Json{{"count", duality_count},
                              {"self_duality_violations", self_bad},
                              {"sep_bpsd_violations", sep_bad},
                              {"passed", ok}}
                             .dump(2)
                      << "\n";
            return ok ? kExitIn : kExitVerifyFailure;
        }

        if (kraus_cmd->parsed()) {
            const BipartiteOperator c = bipartite_from_json(load_json_file(kraus_input));
            std::vector<Matrix> kraus;
            try {
                kraus = kraus_from_psd(c, cfg);
            } catch (const std::invalid_argument& e) {
                std::cerr << e.what() << "\n";
                return kExitInputError;
            }
            const BipartiteOperator back =
                choi_matrix(LinearMapSpec::from_kraus(c.d(), c.s(), kraus));
            const double err = (c - back).frobenius() / norm_scale(c.frobenius());
            Json ops = Json::array();
            for (const auto& k : kraus) {
                Json rows = Json::array();
                for (Eigen::Index i = 0; i < k.rows(); ++i) {
                    Json row = Json::array();
                    for (Eigen::Index j = 0; j < k.cols(); ++j)
                        row.push_back(Json::array({k(i, j).real(), k(i, j).imag()}));
                    rows.push_back(std::move(row));
                }
                ops.push_back(std::move(rows));
            }
            const Json result{{"d", c.d()},
                              {"s", c.s()},
                              {"kraus", std::move(ops)},
                              {"reconstruction_error", err}};
            if (kraus_out.empty())
                std::cout << result.dump(2) << "\n";
            else
                save_json_file(kraus_out, result);
            return err <= 1e-8 ? kExitIn : kExitVerifyFailure;
        }

        if (lift_cmd->parsed()) {
            const Json pts = load_json_file(lift_points_path);
            if (!pts.is_array()) throw InputError("points file must be a JSON array");
            std::vector<SlicePoint> points;
            for (const auto& item : pts) {
                if (!item.is_array() || item.size() != 2)
                    throw InputError("each point must be an [a, b] pair");
                points.push_back({item[0].get<double>(), item[1].get<double>()});
            }
            const Report report = lift_equivalence_check(points, lift_d, lift_s, cfg);
            std::cout << report_to_json(report).dump(2) << "\n";
            return report.passed ? kExitIn : kExitVerifyFailure;
        }

        if (minmax_cmd->parsed()) {
            const PolyhedralCone cone = cone_from_json(load_json_file(minmax_cone_path));
            Rng rng(seed);
            int disagreements = 0, inconclusive = 0, unverified = 0, cmin_only = 0;
            for (int trial = 0; trial < minmax_count; ++trial) {
                std::vector<HermitianMatrix> coords;
                for (int i = 0; i < cone.dim; ++i) {
                    const std::uint64_t s = Rng::derive_seed(seed, 16 * trial + i);
                    coords.push_back(trial % 2 == 0 ? random_psd(minmax_level, s)
                                                    : random_hermitian(minmax_level, s));
                }
                const MatrixTuple a = MatrixTuple::validated(std::move(coords));
                ToleranceConfig trial_cfg = cfg;
                trial_cfg.seed = Rng::derive_seed(seed, 0xACE + trial);
                const bool in_max = member_cmax(cone, a, cfg.psd_tol);
                const CminVerdict in_min = member_cmin(cone, a, trial_cfg);
                if (in_min.status == Status::Inconclusive) {
                    ++inconclusive;
                    continue;
                }
                if (!verify_cmin_certificate(cone, a, in_min, trial_cfg)) ++unverified;
                if (!in_max && in_min.status == Status::In) ++disagreements;
                if (in_max && in_min.status == Status::Out) ++cmin_only;
            }
            const auto gap = find_cmax_cmin_gap(cone, minmax_level, cfg, minmax_count);
            const bool ok = disagreements == 0 && unverified == 0;
            std::cout << Json{{"count", minmax_count},
                              {"cmin_in_but_cmax_out", disagreements},
                              {"cmax_in_but_cmin_out", cmin_only},
                              {"inconclusive", inconclusive},
                              {"unverified", unverified},
                              {"gap_element_found", gap.has_value()},
                              {"passed", ok}}
                             .dump(2)
                      << "\n";
            return ok ? kExitIn : kExitVerifyFailure;
        }

        // verify
        const auto results = run_acceptance(std::cout, seed, nthreads);
        return acceptance_passed(results) ? kExitIn : kExitVerifyFailure;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailure;
    }
}
