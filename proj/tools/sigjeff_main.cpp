// Command line front end: significance testing of joint variable effects in
// two-class data, simulation of benchmark designs, and comparison against the
// marginal t baseline.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sigjeff/csv_io.hpp"
#include "sigjeff/eval.hpp"
#include "sigjeff/pipeline.hpp"
#include "sigjeff/simdata.hpp"

namespace {

using sigjeff::RunConfig;

struct CommonOpts {
    RunConfig cfg;
    std::string pvalue = "empirical";
};

void add_run_options(CLI::App* cmd, CommonOpts& o, bool need_out) {
    cmd->add_option("--input", o.cfg.input_path, "input CSV (header row, one label column)")
        ->required();
    cmd->add_option("--labels", o.cfg.label_column,
                    "name of the label column (default: label)");
    cmd->add_option("--labels-file", o.cfg.labels_file,
                    "separate label file, one label per data row");
    cmd->add_option("--label-map", o.cfg.label_map,
                    "label mapping, e.g. mutant=+1,wildtype=-1");
    cmd->add_option("--permutations", o.cfg.permutations, "label permutations (default 1000)");
    cmd->add_option("--pvalue", o.pvalue, "p-value method: empirical|gaussian|robust")
        ->check(CLI::IsMember({"empirical", "gaussian", "robust"}));
    cmd->add_option("--d0", o.cfg.d0, "active-set width of the fast partition (default 200)");
    cmd->add_option("--exhaustive-limit", o.cfg.exhaustive_limit,
                    "largest d handled by the exhaustive partition (default 1000)");
    cmd->add_option("--sd-threshold", o.cfg.sd_threshold,
                    "drop variables with overall sd <= threshold (default 0: off)");
    cmd->add_option("--seed", o.cfg.seed, "RNG seed (default 0)");
    cmd->add_option("--workers", o.cfg.workers,
                    "worker threads for the permutation stage (default 1, 0 = all cores)");
    auto* out = cmd->add_option("--out-dir", o.cfg.out_dir, "directory for result files");
    if (need_out) out->required();
}

sigjeff::PValueMethod method_from(const std::string& name) {
    if (name == "gaussian") return sigjeff::PValueMethod::gaussian;
    if (name == "robust") return sigjeff::PValueMethod::robust;
    return sigjeff::PValueMethod::empirical;
}

void warn_flags(const sigjeff::RunArtifacts& art) {
    if (art.partition.d0_clamped)
        std::fprintf(stderr, "sigjeff: warning: d0 exceeded the variable count; clamped to %d\n",
                     art.partition.d0);
    int fallbacks = 0;
    for (const auto& e : art.permutation.entries)
        if (e.empirical_fallback) ++fallbacks;
    if (fallbacks > 0)
        std::fprintf(stderr,
                     "sigjeff: warning: Gaussian null fit had zero scale for %d pair(s); "
                     "used empirical p-values there\n",
                     fallbacks);
}

int cmd_run(CommonOpts& o) {
    o.cfg.method = method_from(o.pvalue);
    const sigjeff::RunArtifacts art = sigjeff::run_pipeline(o.cfg);
    warn_flags(art);
    std::printf("wrote %zu files to %s (pairs: %zu, pi0: %.4f)\n", art.files.size(),
                o.cfg.out_dir.c_str(), art.partition.pairs.size(), art.fdr.pi0);
    return 0;
}

int cmd_fdr(CommonOpts& o, const std::string& cutoffs_spec) {
    o.cfg.method = method_from(o.pvalue);
    if (!cutoffs_spec.empty()) {
        for (std::size_t start = 0; start <= cutoffs_spec.size();) {
            std::size_t pos = cutoffs_spec.find(',', start);
            if (pos == std::string::npos) pos = cutoffs_spec.size();
            o.cfg.cutoffs.push_back(std::stod(cutoffs_spec.substr(start, pos - start)));
            start = pos + 1;
        }
    }
    const sigjeff::RunArtifacts art = sigjeff::run_pipeline(o.cfg);
    warn_flags(art);
    std::printf("pi0: %.6f over %zu cutoffs -> %s/fdr.csv\n", art.fdr.pi0,
                art.fdr.rows.size(), o.cfg.out_dir.c_str());
    return 0;
}

int cmd_simulate(const std::string& design, int d, int n_per_class, double rho,
                 double signal, bool signal_squared, std::uint64_t seed,
                 const std::string& out_dir) {
    sigjeff::SimSpec spec;
    if (design == "ar1")
        spec.design = sigjeff::SimDesign::ar1;
    else if (design == "block")
        spec.design = sigjeff::SimDesign::block_diagonal;
    else
        spec.design = sigjeff::SimDesign::independent;
    spec.d = d;
    spec.n_per_class = n_per_class;
    spec.rho = rho;
    spec.signal = signal;
    spec.signal_is_squared = signal_squared;
    spec.seed = seed;

    const sigjeff::SimData sim = sigjeff::generate(spec);
    std::filesystem::create_directories(out_dir);
    sigjeff::write_csv(out_dir + "/data.csv", sim.data);

    nlohmann::ordered_json truth;
    truth["design"] = design;
    truth["seed"] = seed;
    truth["shift_scale"] = sim.shift_scale;
    std::vector<std::string> non_null;
    for (std::size_t v = 0; v < sim.truth.non_null.size(); ++v)
        if (sim.truth.is_non_null(static_cast<int>(v)))
            non_null.push_back(sim.data.name_of(v));
    truth["non_null"] = non_null;
    std::ofstream tf(out_dir + "/truth.json", std::ios::binary);
    tf << truth.dump(2) << "\n";
    if (!tf) throw sigjeff::error("cannot write " + out_dir + "/truth.json");

    std::printf("wrote %s/data.csv (%zu x %zu) and truth.json\n", out_dir.c_str(),
                sim.data.rows(), sim.data.cols());
    return 0;
}

int cmd_compare(CommonOpts& o, const std::string& truth_path, int max_k) {
    o.cfg.method = method_from(o.pvalue);
    o.cfg.compare_marginal = true;
    const sigjeff::RunArtifacts art = sigjeff::run_pipeline(o.cfg);
    warn_flags(art);

    if (!truth_path.empty()) {
        std::ifstream tf(truth_path);
        if (!tf) throw sigjeff::invalid_input("cannot open " + truth_path);
        nlohmann::json truth_json = nlohmann::json::parse(tf);
        std::set<std::string> non_null;
        for (const auto& name : truth_json.at("non_null"))
            non_null.insert(name.get<std::string>());

        const sigjeff::LabeledMatrix& kept = art.prescreen.data;
        sigjeff::GroundTruth truth;
        truth.non_null.assign(kept.cols(), 0);
        for (std::size_t v = 0; v < kept.cols(); ++v)
            if (non_null.count(kept.name_of(v))) truth.non_null[v] = 1;

        const std::size_t limit = std::min<std::size_t>(
            max_k, std::min(art.ranking.variables.size(), art.marginal.size()));
        const auto joint_tn = sigjeff::true_nonnull_curve(art.ranking.variables, truth, limit);
        const auto joint_fdp = sigjeff::fdp_curve(art.ranking.variables, truth, limit);
        const auto marg_tn = sigjeff::true_nonnull_curve(art.marginal, truth, limit);
        const auto marg_fdp = sigjeff::fdp_curve(art.marginal, truth, limit);

        std::string out = "k,joint_true_nonnull,joint_fdp,marginal_true_nonnull,marginal_fdp\n";
        for (std::size_t k = 0; k < limit; ++k) {
            out += std::to_string(k + 1);
            out += ',';
            out += std::to_string(joint_tn[k]);
            out += ',';
            sigjeff::append_number(out, joint_fdp[k]);
            out += ',';
            out += std::to_string(marg_tn[k]);
            out += ',';
            sigjeff::append_number(out, marg_fdp[k]);
            out += '\n';
        }
        std::ofstream cf(o.cfg.out_dir + "/curves.csv", std::ios::binary);
        cf << out;
        if (!cf) throw sigjeff::error("cannot write " + o.cfg.out_dir + "/curves.csv");
        std::printf("wrote curves up to k=%zu -> %s/curves.csv\n", limit,
                    o.cfg.out_dir.c_str());
    }
    std::printf("joint and marginal rankings in %s\n", o.cfg.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"significance testing of joint variable effects in binary classification"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    auto* run = app.add_subcommand("run", "full analysis of a labeled CSV");
    add_run_options(run, run_opts, true);

    std::string sim_design = "ar1";
    int sim_d = 500, sim_n = 50;
    double sim_rho = -0.8, sim_signal = 2.5;
    bool sim_squared = false;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    auto* sim = app.add_subcommand("simulate", "generate benchmark data with known truth");
    sim->add_option("--design", sim_design, "ar1|block|independent")
        ->check(CLI::IsMember({"ar1", "block", "independent"}));
    sim->add_option("--d", sim_d, "variables (default 500, minimum 50)");
    sim->add_option("--n-per-class", sim_n, "samples per class (default 50)");
    sim->add_option("--rho", sim_rho, "ar1 lag-1 correlation (default -0.8)");
    sim->add_option("--signal", sim_signal,
                    "class-mean Mahalanobis distance (default 2.5)");
    sim->add_flag("--signal-squared", sim_squared,
                  "interpret --signal as the squared distance");
    sim->add_option("--seed", sim_seed, "RNG seed (default 0)");
    sim->add_option("--out-dir", sim_out, "directory for data.csv and truth.json")
        ->required();

    CommonOpts cmp_opts;
    std::string cmp_truth;
    int cmp_max_k = 50;
    auto* cmp = app.add_subcommand(
        "compare", "joint vs marginal ranking, with accuracy curves when truth is known");
    add_run_options(cmp, cmp_opts, true);
    cmp->add_option("--truth", cmp_truth, "truth.json from simulate");
    cmp->add_option("--max-k", cmp_max_k, "curve length (default 50)");

    CommonOpts fdr_opts;
    std::string fdr_cutoffs;
    auto* fdr = app.add_subcommand("fdr", "false discovery rate table for a labeled CSV");
    add_run_options(fdr, fdr_opts, true);
    fdr->add_option("--cutoffs", fdr_cutoffs,
                    "comma-separated cutoff grid (default: observed statistics)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_opts);
        if (sim->parsed())
            return cmd_simulate(sim_design, sim_d, sim_n, sim_rho, sim_signal, sim_squared,
                                sim_seed, sim_out);
        if (cmp->parsed()) return cmd_compare(cmp_opts, cmp_truth, cmp_max_k);
        if (fdr->parsed()) return cmd_fdr(fdr_opts, fdr_cutoffs);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sigjeff: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
