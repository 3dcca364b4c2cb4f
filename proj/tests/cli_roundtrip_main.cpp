// Drives the installed command line binary end to end: simulate data, analyze
// it twice (different worker counts), compare against the known truth, build an
// FDR table, and confirm bad input fails loudly. Takes the binary path as its
// only argument; exit status is the number of failed checks.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

int run(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status < 0) return -1;
#ifdef WEXITSTATUS
    return WEXITSTATUS(status);
#else
    return status;
#endif
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <path-to-sigjeff-binary>\n", argv[0]);
        return 2;
    }
    const std::string bin = std::string("\"") + argv[1] + "\"";
    const fs::path base = fs::temp_directory_path() / "sigjeff_cli_roundtrip";
    fs::remove_all(base);
    fs::create_directories(base);
    const auto dir = [&base](const char* name) { return (base / name).string(); };

    // Simulate a small correlated dataset with known truth.
    check(run(bin + " simulate --design ar1 --d 80 --n-per-class 20 --seed 3 --out-dir " +
              dir("sim")) == 0,
          "simulate exits 0");
    check(fs::exists(base / "sim" / "data.csv"), "simulate writes data.csv");
    check(fs::exists(base / "sim" / "truth.json"), "simulate writes truth.json");

    // Analyze it twice; different worker counts must not change a single byte.
    const std::string input = " --input " + dir("sim") + "/data.csv";
    check(run(bin + " run" + input + " --permutations 100 --seed 9 --out-dir " +
              dir("out1")) == 0,
          "run exits 0");
    check(run(bin + " run" + input + " --permutations 100 --seed 9 --workers 3 --out-dir " +
              dir("out2")) == 0,
          "rerun with --workers 3 exits 0");
    for (const char* name :
         {"ranked_pairs.csv", "variable_ranking.csv", "fdr.csv", "manifest.json"}) {
        const std::string a = slurp(base / "out1" / name);
        check(!a.empty(), std::string(name) + " written");
        check(a == slurp(base / "out2" / name), std::string(name) + " byte-identical");
    }

    // Comparison against the simulated truth produces accuracy curves.
    check(run(bin + " compare" + input + " --permutations 80 --seed 4 --truth " +
              dir("sim") + "/truth.json --max-k 30 --out-dir " + dir("cmp")) == 0,
          "compare exits 0");
    const std::string curves = slurp(base / "cmp" / "curves.csv");
    check(curves.rfind("k,joint_true_nonnull,joint_fdp,marginal_true_nonnull,marginal_fdp\n",
                       0) == 0,
          "curves.csv header");
    check(std::count(curves.begin(), curves.end(), '\n') == 31, "curves.csv has 30 rows");
    check(fs::exists(base / "cmp" / "marginal_ranking.csv"), "compare writes marginal ranking");

    // FDR table on a user-chosen cutoff grid.
    check(run(bin + " fdr" + input + " --permutations 60 --seed 2 --cutoffs 0.5,2,8"
                    " --out-dir " + dir("fdr")) == 0,
          "fdr exits 0");
    const std::string fdr_csv = slurp(base / "fdr" / "fdr.csv");
    check(fdr_csv.rfind("cutoff,n_called,", 0) == 0, "fdr.csv header");
    check(std::count(fdr_csv.begin(), fdr_csv.end(), '\n') == 4, "fdr.csv has 3 cutoff rows");

    // Failures are loud and nonzero: missing input, bad flag value, no subcommand.
    const std::string err_log = dir("stderr.txt");
    check(run(bin + " run --input " + dir("nope") + "/missing.csv --out-dir " + dir("x") +
              " 2> " + err_log) != 0,
          "missing input exits nonzero");
    const std::string err_text = slurp(err_log);
    check(err_text.find("sigjeff: error:") != std::string::npos, "error goes to stderr");
    check(err_text.find("stage load") != std::string::npos, "error names the stage");
    check(run(bin + " run" + input + " --pvalue bogus --out-dir " + dir("y") +
              " 2> /dev/null") != 0,
          "unknown p-value method rejected");
    check(run(bin + " 2> /dev/null") != 0, "missing subcommand rejected");

    fs::remove_all(base);
    if (g_failures) std::printf("%d check(s) failed\n", g_failures);
    return g_failures;
}
