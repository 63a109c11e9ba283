// End-to-end checks of the command-line tool: runs the binary (argv[1]) on
// small instances in a scratch directory and inspects the files it writes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAILED: " << what << "\n";
  }
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc < 0 ? rc : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t data_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  return rows > 0 ? rows - 1 : 0;  // minus header
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_driver <regmix binary>\n";
    return 2;
  }
  const std::string bin = argv[1];
  const fs::path work = fs::temp_directory_path() / "regmix_cli_check";
  fs::remove_all(work);
  fs::create_directories(work);
  const auto at = [&](const std::string& sub) { return (work / sub).string(); };
  const std::string quiet = " > " + at("stdout.txt") + " 2> " + at("stderr.txt");

  // simulate: row counts and determinism
  check(run(bin + " --seed 9 --out " + at("s1") + " simulate --model sim1 --n 500" + quiet) == 0,
        "simulate sim1 exits 0");
  check(data_rows(work / "s1/data.csv") == 500, "sim1 data.csv has 500 rows");
  check(data_rows(work / "s1/labels.csv") == 500, "sim1 labels.csv has 500 rows");
  check(data_rows(work / "s1/truth_atoms.csv") == 3, "sim1 truth_atoms.csv has 3 rows");
  check(run(bin + " --seed 9 --out " + at("s1b") + " simulate --model sim1 --n 500" + quiet) == 0,
        "second simulate exits 0");
  check(slurp(work / "s1/data.csv") == slurp(work / "s1b/data.csv"),
        "same seed gives byte-identical data.csv");
  check(run(bin + " --seed 1 --out " + at("s2") + " simulate --model sim2 --n 300" + quiet) == 0,
        "simulate sim2 exits 0");
  check(data_rows(work / "s2/truth_betas.csv") == 300, "sim2 truth_betas.csv has 300 rows");

  // usage errors exit with 2
  check(run(bin + " --out " + at("x") + " simulate --model sim99" + quiet) == 2,
        "unknown model exits 2");
  check(run(bin + " definitely-not-a-command" + quiet) == 2, "unknown subcommand exits 2");

  // small dataset for fits
  check(run(bin + " --seed 4 --out " + at("d") + " simulate --model sim1 --n 150" + quiet) == 0,
        "simulate fit input");
  const std::string data_args = " --data " + at("d/data.csv") + " --sigma 0.5";

  // fit with a zero iteration cap returns the initialization, not converged
  check(run(bin + " --seed 4 --out " + at("f0") + " fit" + data_args +
            " --method npkmle --grid-nodes 41 --max-iter 0" + quiet) == 0,
        "fit --max-iter 0 exits 0");
  const std::string f0 = slurp(work / "f0/report.json");
  check(f0.find("\"converged\": false") != std::string::npos, "max-iter 0 is not converged");
  check(f0.find("\"iterations\": 0") != std::string::npos, "max-iter 0 runs 0 iterations");

  // particle fit: atoms, labels, particles, trace
  check(run(bin + " --seed 4 --out " + at("f1") + " fit" + data_args +
            " --method npkmle --grid-nodes 41" + quiet) == 0,
        "fit npkmle exits 0");
  check(fs::exists(work / "f1/atoms.csv"), "fit writes atoms.csv");
  check(fs::exists(work / "f1/particles.csv"), "fit writes particles.csv");
  check(data_rows(work / "f1/labels.csv") == 150, "labels.csv labels every row");
  check(data_rows(work / "f1/particles.csv") == 150, "one particle per observation");

  // density fit
  check(run(bin + " --seed 4 --out " + at("f2") + " fit" + data_args +
            " --method npmle --grid-nodes 41 --max-iter 80" + quiet) == 0,
        "fit npmle exits 0");
  check(data_rows(work / "f2/grid.csv") == 41 * 41, "grid.csv has nodes^2 rows");

  // missing sigma is an error (exit 1)
  check(run(bin + " --out " + at("f3") + " fit --data " + at("d/data.csv") +
            " --method npkmle" + quiet) == 1,
        "fit without sigma exits 1");

  // postprocess: modes from the density fit
  check(run(bin + " --seed 4 --out " + at("p1") + " postprocess --grid " + at("f2/grid.csv") +
            " --mode meanshift --samples 400" + quiet) == 0,
        "postprocess meanshift exits 0");
  check(fs::exists(work / "p1/atoms.csv"), "postprocess writes atoms.csv");

  check(run(bin + " --seed 4 --out " + at("p2") + " postprocess --grid " + at("f2/grid.csv") +
            " --mode scms --ridge-dim 1 --samples 200" + quiet) == 0,
        "postprocess scms exits 0");
  check(fs::exists(work / "p2/ridge.csv"), "postprocess writes ridge.csv");

  // cv-sigma with an explicit candidate list
  check(run(bin + " --seed 4 --out " + at("cv") + " cv-sigma --data " + at("d/data.csv") +
            " --folds 2 --sigmas 0.4 0.6" + quiet) == 0,
        "cv-sigma exits 0");
  check(data_rows(work / "cv/cv_curve.csv") == 2, "cv curve has one row per candidate");
  check(fs::exists(work / "cv/cv.json"), "cv-sigma writes cv.json");

  // plotdata from the particle fit
  check(run(bin + " --out " + at("pl") + " plotdata --fit " + at("f1") + " --data " +
            at("d/data.csv") + " --svg" + quiet) == 0,
        "plotdata exits 0");
  check(fs::exists(work / "pl/lines.csv"), "plotdata writes lines.csv");
  check(fs::exists(work / "pl/beta_scatter.csv"), "plotdata writes beta_scatter.csv");
  check(fs::exists(work / "pl/plot.svg"), "plotdata writes plot.svg");
  check(slurp(work / "pl/plot.svg").find("<svg") == 0, "plot.svg looks like svg");

  // plotdata heatmap from the density fit
  check(run(bin + " --out " + at("pl2") + " plotdata --fit " + at("f2") + quiet) == 0,
        "plotdata on a density fit exits 0");
  check(data_rows(work / "pl2/heatmap.csv") == 41 * 41, "heatmap.csv has nodes^2 rows");

  // experiment, single tiny replication
  check(run(bin + " --seed 4 --out " + at("e") +
            " experiment --model sim1 --method npkmle --n 120 --reps 1 --grid-nodes 41" +
            quiet) == 0,
        "experiment exits 0");
  check(fs::exists(work / "e/summary.csv") && fs::exists(work / "e/runs.csv"),
        "experiment writes summary and runs");

  if (failures == 0) {
    std::cout << "cli_driver: all checks passed\n";
    fs::remove_all(work);
    return 0;
  }
  std::cerr << "cli_driver: " << failures << " checks failed (outputs kept in " << work
            << ")\n";
  return 1;
}
