#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigjeff/fdr.hpp"
#include "sigjeff/marginal.hpp"
#include "sigjeff/partition.hpp"
#include "sigjeff/permutation.hpp"
#include "sigjeff/types.hpp"

namespace sigjeff {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    // Input; ignored by the in-memory overload.
    std::string input_path;
    std::string label_column = "label";
    std::string labels_file;  // non-empty: labels live in a separate file
    std::string label_map;    // "name=+1,name=-1"; empty accepts +1/-1 literals

    int permutations = 1000;
    PValueMethod method = PValueMethod::empirical;
    int d0 = 200;
    int exhaustive_limit = 1000;  // d above this switches to the fast partition
    double sd_threshold = 0.0;
    std::uint64_t seed = 0;
    int workers = 1;

    std::string out_dir;  // empty: in-memory only, nothing written
    bool compare_marginal = false;
    std::vector<double> cutoffs;  // FDR grid; empty uses the observed statistics
};

struct RunArtifacts {
    PrescreenResult prescreen;  // kept data + original indices
    Partition partition;        // in kept-column index space
    PermutationResult permutation;
    RankedList ranking;
    FdrTable fdr;
    std::vector<int> marginal;       // only populated with compare_marginal
    std::vector<std::string> files;  // files written under out_dir
};

// Full pipeline: load (or take) data -> sd prescreen -> partition (exhaustive
// up to exhaustive_limit variables, fast beyond) -> label-permutation null ->
// p-values and ranking -> FDR table -> reports. Every failure names its stage.
// For a fixed config and seed the written bundle is byte-identical across runs
// and worker counts.
RunArtifacts run_pipeline(const RunConfig& config);
RunArtifacts run_pipeline(const LabeledMatrix& data, const RunConfig& config);

}  // namespace sigjeff
