#include "sigjeff/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <utility>

#include <nlohmann/json.hpp>

#include "sigjeff/csv_io.hpp"
#include "sigjeff/kernels.hpp"

namespace sigjeff {

namespace {

using ordered_json = nlohmann::ordered_json;

template <class F>
auto stage(const char* name, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw error(std::string("stage ") + name + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error("cannot write " + path.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw error("write failed for " + path.string());
}

std::string method_name(PValueMethod m) {
    switch (m) {
        case PValueMethod::empirical: return "empirical";
        case PValueMethod::gaussian: return "gaussian";
        case PValueMethod::robust: return "robust";
    }
    return "empirical";
}

void write_reports(const LabeledMatrix& original, const TwoSampleSummary& summary,
                   const RunConfig& config, RunArtifacts& art) {
    namespace fs = std::filesystem;
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    const LabeledMatrix& kept = art.prescreen.data;

    std::string out;
    out += "rank,var_i,var_j,m,p_value,null_mean,null_std,null_median,null_mad,"
           "regularized_draws\n";
    // Ranked entries carry kept-space indices; reports speak variable names.
    const auto& entries = art.ranking.entries;
    std::map<std::pair<int, int>, const EntryResult*> by_pair;
    for (const auto& er : art.permutation.entries) by_pair[{er.i, er.j}] = &er;
    for (std::size_t r = 0; r < entries.size(); ++r) {
        const RankedEntry& re = entries[r];
        const EntryResult* er = by_pair.at({re.i, re.j});
        out += std::to_string(r + 1);
        out += ',';
        out += kept.name_of(re.i);
        out += ',';
        out += re.j == re.i ? "" : kept.name_of(re.j);
        out += ',';
        append_number(out, re.m);
        out += ',';
        append_number(out, re.pvalue);
        out += ',';
        append_number(out, er->null_mean);
        out += ',';
        append_number(out, er->null_std);
        out += ',';
        append_number(out, er->null_median);
        out += ',';
        append_number(out, er->null_mad);
        out += ',';
        out += std::to_string(er->regularized_draws);
        out += '\n';
    }
    write_text(dir / "ranked_pairs.csv", out);
    art.files.push_back("ranked_pairs.csv");

    out.clear();
    out += "rank,variable\n";
    for (std::size_t r = 0; r < art.ranking.variables.size(); ++r) {
        out += std::to_string(r + 1);
        out += ',';
        out += kept.name_of(art.ranking.variables[r]);
        out += '\n';
    }
    write_text(dir / "variable_ranking.csv", out);
    art.files.push_back("variable_ranking.csv");

    out.clear();
    out += "cutoff,n_called,median_null_called,p90_null_called,pi0,fdr_median,fdr_p90\n";
    for (const FdrRow& row : art.fdr.rows) {
        append_number(out, row.cutoff);
        out += ',';
        out += std::to_string(row.n_called);
        out += ',';
        append_number(out, row.median_null_called);
        out += ',';
        append_number(out, row.p90_null_called);
        out += ',';
        append_number(out, art.fdr.pi0);
        out += ',';
        append_number(out, row.fdr_median);
        out += ',';
        append_number(out, row.fdr_p90);
        out += '\n';
    }
    write_text(dir / "fdr.csv", out);
    art.files.push_back("fdr.csv");

    if (config.compare_marginal) {
        out.clear();
        out += "rank,variable,t\n";
        for (std::size_t r = 0; r < art.marginal.size(); ++r) {
            out += std::to_string(r + 1);
            out += ',';
            out += kept.name_of(art.marginal[r]);
            out += ',';
            append_number(out, summary.tstat()[art.marginal[r]]);
            out += '\n';
        }
        write_text(dir / "marginal_ranking.csv", out);
        art.files.push_back("marginal_ranking.csv");
    }

    ordered_json manifest;
    manifest["artifact"] = "sigjeff";
    manifest["version"] = kVersion;
    manifest["seed"] = config.seed;
    ordered_json cfg;
    cfg["input"] = config.input_path;
    cfg["label_column"] = config.label_column;
    cfg["labels_file"] = config.labels_file;
    cfg["label_map"] = config.label_map;
    cfg["permutations"] = config.permutations;
    cfg["pvalue_method"] = method_name(config.method);
    cfg["d0"] = config.d0;
    cfg["exhaustive_limit"] = config.exhaustive_limit;
    cfg["sd_threshold"] = config.sd_threshold;
    cfg["cutoffs"] = config.cutoffs;  // empty means the observed statistics
    cfg["compare_marginal"] = config.compare_marginal;
    manifest["config"] = cfg;
    manifest["input_shape"] = {{"samples", original.rows()},
                               {"variables", original.cols()},
                               {"class_plus", original.n1},
                               {"class_minus", original.n2}};
    manifest["prescreen"] = {{"threshold", config.sd_threshold},
                             {"kept", art.prescreen.kept.size()},
                             {"dropped", original.cols() - art.prescreen.kept.size()}};
    ordered_json part;
    part["mode"] = art.partition.mode == PartitionMode::exhaustive ? "exhaustive" : "fast";
    if (art.partition.mode == PartitionMode::fast) {
        part["d0"] = art.partition.d0;
        part["d0_clamped"] = art.partition.d0_clamped;
    }
    part["pairs"] = art.partition.pairs.size();
    part["leftover"] =
        art.partition.leftover ? ordered_json(kept.name_of(*art.partition.leftover))
                               : ordered_json(nullptr);
    part["pairs_evaluated"] = art.partition.pairs_evaluated;
    part["peak_active_pairs"] = art.partition.peak_active_pairs;
    manifest["partition"] = part;
    manifest["kernels"] = kernels::backend_name();
    int fallbacks = 0;
    for (const auto& er : art.permutation.entries)
        if (er.empirical_fallback) ++fallbacks;
    manifest["pvalue"] = {{"method", method_name(config.method)},
                          {"empirical_fallbacks", fallbacks}};
    manifest["pi0"] = art.fdr.pi0;
    art.files.push_back("manifest.json");
    manifest["outputs"] = art.files;
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

RunArtifacts run_pipeline(const LabeledMatrix& data, const RunConfig& config) {
    if (config.permutations < 1) throw invalid_input("permutations must be positive");
    if (config.exhaustive_limit < 2) throw invalid_input("exhaustive limit must be >= 2");

    RunArtifacts art;
    art.prescreen = stage("prescreen", [&] { return prescreen_by_sd(data, config.sd_threshold); });
    const LabeledMatrix& kept = art.prescreen.data;

    const TwoSampleSummary summary = stage("summarize", [&] { return summarize(kept); });

    art.partition = stage("partition", [&] {
        if (static_cast<int>(kept.cols()) <= config.exhaustive_limit)
            return partition_exhaustive(summary);
        return partition_fast(summary, config.d0);
    });

    art.permutation = stage("permutation", [&] {
        PermutationConfig pc;
        pc.permutations = config.permutations;
        pc.method = config.method;
        pc.seed = config.seed;
        pc.workers = config.workers;
        return run_permutations(kept, summary, art.partition, pc);
    });

    art.ranking = stage("ranking", [&] { return rank_pairs(art.permutation); });

    art.fdr = stage("fdr", [&] {
        return estimate_fdr(art.permutation,
                            std::span<const double>(config.cutoffs));
    });

    if (config.compare_marginal)
        art.marginal = stage("marginal", [&] { return rank_marginal(summary); });

    if (!config.out_dir.empty())
        stage("report", [&] {
            write_reports(data, summary, config, art);
            return 0;
        });
    return art;
}

RunArtifacts run_pipeline(const RunConfig& config) {
    const LabeledMatrix data = stage("load", [&] {
        const LabelMap map = parse_label_map(config.label_map);
        if (!config.labels_file.empty())
            return load_csv_split(config.input_path, config.labels_file, map);
        return load_csv(config.input_path, config.label_column, map);
    });
    return run_pipeline(data, config);
}

}  // namespace sigjeff
