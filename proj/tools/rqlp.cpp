// rqlp: generate test matrices, run decompositions, sweep parameters and
// evaluate bounds.  Exit status is nonzero only for argument and IO errors.

#include <rqlp/experiments.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

std::vector<rqlp::Algorithm> parse_algorithms(const std::vector<std::string>& names)
{
    std::vector<rqlp::Algorithm> out;
    for (const std::string& n : names)
        out.push_back(rqlp::parse_algorithm(n));
    return out;
}

void add_gen_flags(CLI::App* cmd, rqlp::GenSpec& spec)
{
    cmd->add_option("--family", spec.family, "pds, eds, heat or deriv2")->capture_default_str();
    cmd->add_option("--n", spec.n, "matrix dimension")->capture_default_str();
    cmd->add_option("--t", spec.t, "flat prefix length (pds, eds)")->capture_default_str();
    cmd->add_option("--s", spec.s, "decay rate (pds, eds)")->capture_default_str();
    cmd->add_option("--kappa", spec.kappa, "heat kernel parameter")->capture_default_str();
}

void add_run_flags(CLI::App* cmd, rqlp::RunParams& p, std::vector<std::string>& algos)
{
    cmd->add_option("--algo", algos, "qlp, rqlp, sprqlp or sorqlp (repeatable)");
    cmd->add_option("--p", p.p, "oversampling")->capture_default_str();
    cmd->add_option("--l2", p.l2, "sprqlp row sample size (default max(2k, k + p))");
    cmd->add_option("--block-size", p.block_size, "rows per streamed block")->capture_default_str();
    cmd->add_option("--pivot-second", p.pivot_second, "pivot the second QR of the inner QLP (true/false)")
        ->capture_default_str();
    cmd->add_flag("!--no-sv", p.sv_rows, "omit per-j singular value rows");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"QLP and randomized single-pass QLP decompositions"};
    app.require_subcommand(1);

    rqlp::GenSpec gen_spec;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "generate a test matrix and its .meta sidecar");
    add_gen_flags(gen, gen_spec);
    gen->add_option("--seed", gen_spec.seed, "seed for the random orthogonal factors")->capture_default_str();
    gen->add_option("--out", gen_out, "output .rqlpmat path")->required();

    rqlp::RunOptions run_opts;
    std::string run_matrix;
    std::string run_out;
    std::vector<std::string> run_algos{"sprqlp"};
    auto* run = app.add_subcommand("run", "decompose a stored matrix and append CSV records");
    run->add_option("matrix", run_matrix, ".rqlpmat file")->required();
    run->add_option("--k", run_opts.params.k, "target rank")->required();
    run->add_option("--seed", run_opts.params.seed, "sketch seed")->capture_default_str();
    run->add_option("--out", run_out, "CSV file to append to (default: stdout)");
    add_run_flags(run, run_opts.params, run_algos);

    rqlp::SweepOptions sweep_opts;
    std::string sweep_matrix;
    std::string sweep_out;
    std::vector<std::string> sweep_algos{"qlp", "rqlp", "sprqlp", "sorqlp"};
    std::vector<rqlp::Index> sweep_ks;
    std::vector<std::uint64_t> sweep_seeds{0};
    auto* sweep = app.add_subcommand("sweep", "cross product of algorithms, ranks and seeds");
    add_gen_flags(sweep, sweep_opts.spec);
    sweep->add_option("--matrix", sweep_matrix, "use a stored matrix instead of generating one");
    sweep->add_option("--matrix-seed", sweep_opts.spec.seed, "seed of the generated matrix")->capture_default_str();
    sweep->add_option("--k", sweep_ks, "target ranks (repeatable)")->required();
    sweep->add_option("--seed", sweep_seeds, "sketch seeds (repeatable)")->capture_default_str();
    sweep->add_option("--out", sweep_out, "CSV file to append to (default: stdout)");
    add_run_flags(sweep, sweep_opts.params, sweep_algos);

    rqlp::BoundsOptions bounds_opts;
    std::string bounds_sigmas;
    std::string bounds_out;
    auto* bounds = app.add_subcommand("bounds", "evaluate the probabilistic error bounds for a spectrum");
    add_gen_flags(bounds, bounds_opts.spec);
    bounds->add_option("--sigmas", bounds_sigmas, ".meta sidecar or list of singular values");
    bounds->add_option("--seed", bounds_opts.spec.seed, "seed (kernel families ignore it)")->capture_default_str();
    bounds->add_option("--k", bounds_opts.k, "target rank")->required();
    bounds->add_option("--p", bounds_opts.p, "oversampling")->capture_default_str();
    bounds->add_option("--l2", bounds_opts.l2, "sprqlp row sample size (default max(2k, k + p))");
    bounds->add_option("--delta", bounds_opts.delta, "failure tolerance")->capture_default_str();
    bounds->add_option("--a2", bounds_opts.a2, "norm tail constant")->capture_default_str();
    bounds->add_option("--out", bounds_out, "bounds CSV to append to");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            rqlp::cmd_gen(gen_spec, gen_out);
        } else if (run->parsed()) {
            run_opts.matrix = run_matrix;
            run_opts.algorithms = parse_algorithms(run_algos);
            if (!run_out.empty())
                run_opts.out = run_out;
            const auto records = rqlp::cmd_run(run_opts);
            if (run_out.empty()) {
                std::cout << rqlp::kCsvHeader << "\n";
                for (const auto& r : records)
                    std::cout << rqlp::format_record(r);
            }
        } else if (sweep->parsed()) {
            if (!sweep_matrix.empty())
                sweep_opts.matrix = sweep_matrix;
            sweep_opts.ks = sweep_ks;
            sweep_opts.seeds = sweep_seeds;
            sweep_opts.algorithms = parse_algorithms(sweep_algos);
            if (!sweep_out.empty())
                sweep_opts.out = sweep_out;
            const auto records = rqlp::cmd_sweep(sweep_opts);
            if (sweep_out.empty()) {
                std::cout << rqlp::kCsvHeader << "\n";
                for (const auto& r : records)
                    std::cout << rqlp::format_record(r);
            }
        } else if (bounds->parsed()) {
            if (!bounds_sigmas.empty())
                bounds_opts.sigmas = bounds_sigmas;
            if (!bounds_out.empty())
                bounds_opts.out = bounds_out;
            rqlp::cmd_bounds(bounds_opts, std::cout);
        }
    } catch (const rqlp::IoError& e) {
        std::cerr << "rqlp: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "rqlp: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "rqlp: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
