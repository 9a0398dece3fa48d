// Drives the built command-line binary end to end: generate -> encode ->
// link -> evaluate -> attack, both linkage modes, exit-code contract and
// byte-level determinism. Prints one PASS/FAIL line per check; the exit code
// is the number of failed checks.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string cli;
fs::path dir;
int failures = 0;

int run(const std::string& args) {
    const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void check(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string party_files(const std::string& prefix, int count) {
    std::string out;
    for (int i = 0; i < count; ++i)
        out += " " + (dir / (prefix + std::to_string(i) + ".csv")).string();
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_smoke <path-to-cli>\n");
        return 1;
    }
    cli = argv[1];
    dir = fs::temp_directory_path() / ("mpprl_smoke_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    const std::string out_dir = dir.string();

    // pipeline: generate, encode, link, evaluate
    check(run("generate --parties 3 --records 300 --corruption 0.2 --seed 5 "
              "--out-dir " + out_dir) == 0,
          "generate exits 0");
    check(fs::exists(dir / "party0.csv") && fs::exists(dir / "party2.csv"),
          "generate writes one file per party");

    check(run("encode --in" + party_files("party", 3) + " --out-dir " + out_dir) == 0,
          "encode exits 0");
    check(fs::exists(dir / "encoded2.csv"), "encode writes one file per party");

    check(run("link --in" + party_files("encoded", 3) +
              " --mapping early --workers 2 --out " + (dir / "matches.csv").string() +
              " --stats-out " + (dir / "stats.csv").string()) == 0,
          "link (direct mode) exits 0");
    check(fs::exists(dir / "matches.csv") && fs::exists(dir / "stats.csv"),
          "link writes matches and stats");

    check(run("evaluate --matches " + (dir / "matches.csv").string() + " --truth" +
              party_files("party", 3) + " --out " + (dir / "report.csv").string()) == 0,
          "evaluate exits 0");
    check(slurp(dir / "report.csv").find("f_measure") != std::string::npos,
          "evaluate writes the quality report");

    // attack, both modes
    check(run("attack --mode bf --encoded" + party_files("encoded", 3) + " --global" +
              party_files("party", 3) + " --out " + (dir / "attack_bf.csv").string()) ==
              0,
          "attack (bit-filter mode) exits 0");
    check(run("attack --mode cbf --encoded" + party_files("encoded", 3) + " --global" +
              party_files("party", 3) + " --matches " + (dir / "matches.csv").string() +
              " --out " + (dir / "attack_cbf.csv").string()) == 0,
          "attack (counting-filter mode) exits 0");

    // protocol mode on plaintext inputs, with a transcript
    check(run("link --mode cbf-protocol --in" + party_files("party", 3) +
              " --out " + (dir / "matches_proto.csv").string() + " --transcript-out " +
              (dir / "transcript.csv").string()) == 0,
          "link (summation-protocol mode) exits 0");
    check(slurp(dir / "transcript.csv").find("session_id") != std::string::npos,
          "protocol link writes a transcript");

    // bench sweep
    check(run("bench --parties-list 3 --records-list 120 --repeats 3 --out " +
              (dir / "bench.csv").string()) == 0,
          "bench exits 0");
    check(slurp(dir / "bench.csv").find("f_measure") != std::string::npos,
          "bench writes the sweep table");

    // exit-code contract: 2 for configuration errors, 3 for data errors
    check(run("link --in" + party_files("encoded", 3) + " --mapping sideways") == 2,
          "unknown mapping exits 2");
    check(run("generate --parties 1") == 2, "invalid generation spec exits 2");
    check(run("evaluate --matches " + (dir / "nope.csv").string() + " --truth" +
              party_files("party", 3)) == 3,
          "missing input file exits 3");
    check(run("frobnicate") == 2, "unknown subcommand exits 2");

    // determinism: the same seed produces byte-identical matches twice
    const fs::path rerun = dir / "rerun";
    fs::create_directories(rerun);
    bool ok = true;
    for (int round = 0; round < 2; ++round) {
        const fs::path sub = rerun / std::to_string(round);
        fs::create_directories(sub);
        ok = ok && run("generate --parties 3 --records 300 --corruption 0.2 --seed 5 "
                       "--out-dir " + sub.string()) == 0;
        ok = ok && run("encode --in " + (sub / "party0.csv").string() + " " +
                       (sub / "party1.csv").string() + " " +
                       (sub / "party2.csv").string() + " --out-dir " + sub.string()) == 0;
        ok = ok && run("link --in " + (sub / "encoded0.csv").string() + " " +
                       (sub / "encoded1.csv").string() + " " +
                       (sub / "encoded2.csv").string() + " --workers 4 --out " +
                       (sub / "matches.csv").string()) == 0;
    }
    const std::string first = slurp(rerun / "0" / "matches.csv");
    check(ok && !first.empty() && first == slurp(rerun / "1" / "matches.csv"),
          "re-running the pipeline reproduces matches byte for byte");

    fs::remove_all(dir);
    return failures;
}
