#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "svi_cli_test";

int svi(const std::string& args) {
  const std::string cmd = std::string(SVI_CLI_PATH) + " " + args + " > " + (kDir / "stdout.txt").string() + " 2> " +
                          (kDir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string out_dir() { return " --out-dir " + kDir.string() + " "; }

struct Workspace {
  Workspace() {
    fs::remove_all(kDir);
    fs::create_directories(kDir);
  }
  ~Workspace() { fs::remove_all(kDir); }
};

}  // namespace

TEST_CASE("generate, constants, run, plot, sweep, verify") {
  Workspace ws;
  const std::string game = (kDir / "game.json").string();
  REQUIRE(svi(out_dir() + "--seed 4 generate --n 5 --d1 3 --d2 3 --out game.json") == 0);
  REQUIRE(fs::exists(game));
  const std::string first = slurp(game);
  REQUIRE(svi(out_dir() + "--seed 4 generate --n 5 --d1 3 --d2 3 --out game.json") == 0);
  CHECK(slurp(game) == first);

  CHECK(svi("constants " + game) == 0);
  const std::string text = slurp(kDir / "stdout.txt");
  CHECK(text.find("ell_xi") != std::string::npos);
  CHECK(text.find("mu_H") != std::string::npos);
  CHECK(svi("constants " + game + " --json --scheme minibatch --b 2 --epsilon 0.01") == 0);
  CHECK(slurp(kDir / "stdout.txt").find('{') == 0);

  CHECK(svi(out_dir() + "run --game " + game + " --method sgda,sco,gda --iters 200 --seeds 3 --out run.csv") == 0);
  const std::string csv = slurp(kDir / "run.csv");
  CHECK(csv.rfind("method,iteration,mean_rel_dist,ci_low,ci_high,seeds", 0) == 0);
  CHECK(fs::exists(kDir / "run.svg"));
  CHECK(svi(out_dir() + "run --game " + game + " --method sgda,sco,gda --iters 200 --seeds 3 --out run2.csv") == 0);
  CHECK(slurp(kDir / "run2.csv") == csv);
  CHECK(slurp(kDir / "run2.svg") == slurp(kDir / "run.svg"));
  CHECK(svi(out_dir() + "--threads 3 run --game " + game + " --method sgda,sco,gda --iters 200 --seeds 3 --out run3.csv") ==
        0);
  CHECK(slurp(kDir / "run3.csv") == csv);

  CHECK(svi(out_dir() + "run --game " + game + " --method sgda --schedule switching --iters 100 --seeds 2 --out sw.csv") ==
        0);
  CHECK(svi(out_dir() + "plot " + (kDir / "run.csv").string() + " --out replot.svg --title demo") == 0);
  CHECK(fs::exists(kDir / "replot.svg"));

  CHECK(svi(out_dir() + "sweep --game " + game + " --method sgda --multipliers 0.5,1,2 --iters 100 --seeds 2 --out sweep.csv") ==
        0);
  CHECK(fs::exists(kDir / "sweep.csv"));

  CHECK(svi(out_dir() + "verify " + game + " --checks ec,class,unbiased --points 50 --json report.json") == 0);
  CHECK(slurp(kDir / "stdout.txt").find("PASS") != std::string::npos);
  CHECK(fs::exists(kDir / "report.json"));
}

TEST_CASE("exit codes for bad input") {
  Workspace ws;
  CHECK(svi("") == 2);
  CHECK(svi("frobnicate") == 2);
  CHECK(svi("constants " + (kDir / "missing.json").string()) == 2);
  CHECK(svi(out_dir() + "generate --n 3 --mu-a 5 --L-a 1 --out bad.json") == 2);
  CHECK(svi(out_dir() + "generate --n 3 --out g.json") == 0);
  CHECK(svi(out_dir() + "run --game " + (kDir / "g.json").string() + " --method adam") == 2);
  CHECK(svi(out_dir() + "run --game " + (kDir / "g.json").string() + " --schedule sometimes") == 2);

  std::ofstream(kDir / "garbage.json") << "{ nope";
  CHECK(svi("constants " + (kDir / "garbage.json").string()) == 2);

  // Purely bilinear: no strong monotonicity.
  std::ofstream(kDir / "bilinear.json")
      << R"({"format_version":1,"n":1,"d1":1,"d2":1,"seed":0,"generator":null,)"
      << R"("components":[{"A":[0],"B":[2],"C":[0],"a":[1],"c":[1]}]})";
  CHECK(svi("constants " + (kDir / "bilinear.json").string()) == 3);
}
