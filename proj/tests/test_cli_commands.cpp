#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "config.hpp"

using namespace scb;
using namespace scb::cli;
namespace fs = std::filesystem;

namespace {

RunConfig from_text(const std::string& text) { return build_run_config(parse_key_values(text, "test")); }

double number(const Row& row, const std::string& name) {
  for (const Field& f : row) {
    if (f.name == name) return std::get<double>(f.value);
  }
  ADD_FAILURE() << "no column " << name;
  return std::nan("");
}

const Row* find_quantity(const Table& t, const std::string& q) {
  for (const Row& row : t.rows) {
    if (std::get<std::string>(row[0].value) == q) return &row;
  }
  return nullptr;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("scb_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Runs the installed tool; returns its exit status.
int run_tool(const std::string& args, std::string* stderr_text = nullptr) {
  const fs::path err = fs::temp_directory_path() / "scb_cli_stderr.txt";
  const std::string cmd = std::string("\"") + SCB_EXE_PATH + "\" " + args + " > /dev/null 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  if (stderr_text) {
    std::ifstream in(err);
    std::ostringstream ss;
    ss << in.rdbuf();
    *stderr_text = ss.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kDesk = R"(
model.E_C = 1
model.E_J = 0.1
model.N = 10000
model.nbar = 400
model.lambda = 0.01
bath.g2 = 1
bath.r = 1
)";

}  // namespace

TEST(CliFreq, ReferenceValuesAtResonance) {
  const Table t = freq_table(from_text("model.E_C = 1e11\nmodel.E_J = 1e10\n"));
  const Row& row = t.rows.front();
  EXPECT_DOUBLE_EQ(number(row, "omega_q"), 1e10);
  EXPECT_DOUBLE_EQ(number(row, "omega_q_resonance"), 1e10);
  EXPECT_NEAR(number(row, "omega_c") / std::sqrt(2e21), 1.0, 1e-15);
}

TEST(CliFreq, EqualEnergiesGiveSqrtTwo) {
  const Table t = freq_table(from_text("model.E_C = 3\nmodel.E_J = 3\n"));
  EXPECT_NEAR(number(t.rows.front(), "omega_c_over_omega_q_resonance"), std::sqrt(2.0), 1e-15);
}

TEST(CliFreq, AgreesWhenGivenTheFullModel) {
  const Table a = freq_table(from_text(kDesk));
  const Table b = freq_table(from_text("model.E_C = 1\nmodel.E_J = 0.1\n"));
  EXPECT_DOUBLE_EQ(number(a.rows.front(), "omega_c"), number(b.rows.front(), "omega_c"));
}

TEST(CliFreq, MissingChargingEnergyExits2) {
  std::string err;
  EXPECT_EQ(run_tool("freq --set model.E_J=1", &err), 2);
  EXPECT_NE(err.find("model.E_C"), std::string::npos) << err;
}

TEST(CliRates, OracleColumnsAgree) {
  RunConfig c = from_text("model.E_C = 1\nmodel.K = 0.05\nmodel.N = 40\nmodel.nbar = 20\nmodel.lambda = 0.05\n"
                          "bath.g2 = 1\nbath.r = 1\nrates.oracle = true\n");
  bool bad = true;
  const Table t = rates_table(c, &bad);
  EXPECT_FALSE(bad);
  const Row& row = t.rows.front();
  EXPECT_LT(number(row, "oracle_fock_rel"), 1e-8);
  EXPECT_LT(number(row, "oracle_coherent_rel"), 1e-8);
  EXPECT_LT(number(row, "oracle_superop_rel"), 1e-8);
}

TEST(CliRates, OracleNeedsSmallSectors) {
  RunConfig c = from_text(kDesk);
  c.rates.oracle = true;
  EXPECT_THROW(rates_table(c), ConfigError);
}

TEST(CliRates, OracleDisagreementExits3) {
  // A tolerance below rounding forces the self-test to fail.
  const std::string args =
      "rates --oracle --set model.E_C=1 --set model.K=0.05 --set model.N=12 --set model.nbar=6 --set model.lambda=0.05 "
      "--set bath.g2=1 --set bath.r=1 --set rates.tolerance=1e-300";
  EXPECT_EQ(run_tool(args), 3);
}

TEST(CliRates, VanishingRatioApproachesOne) {
  RunConfig c = from_text(kDesk);
  c.bath.r = 1e-12;
  EXPECT_NEAR(number(rates_table(c).rows.front(), "ratio"), 1.0, 1e-10);
  EXPECT_EQ(run_tool("rates --set model.E_C=1 --set model.E_J=0.1 --set model.N=100 --set model.nbar=50 "
                     "--set model.lambda=0.01 --set bath.g2=1 --set bath.r=0"),
            2);
}

TEST(CliRates, ReferenceScaleDecayTimes) {
  // lambda^2 g^2 nbar (N - nbar) = E_J^2 fixes g^2.
  const double nbar = 1e8, n = 1e12, ej = 1e10, lambda = 0.01;
  const double g2 = ej * ej / (lambda * lambda * nbar * (n - nbar));
  std::ostringstream cfg;
  cfg << "model.E_C = 1e11\nmodel.E_J = 1e10\nmodel.N = 1e12\nmodel.nbar = 1e8\nmodel.lambda = 0.01\n"
      << "bath.r = 1\nbath.g2 = " << g2 << '\n';
  const Row row = rates_table(from_text(cfg.str())).rows.front();
  EXPECT_GT(number(row, "tau_fock"), 0.5e-9);
  EXPECT_LT(number(row, "tau_fock"), 2e-9);
  EXPECT_GT(number(row, "tau_coherent"), 1e-5 / 3.0);
  EXPECT_LT(number(row, "tau_coherent"), 3e-5);
}

TEST(CliRates, WritesVersionedFiles) {
  TempDir dir("rates");
  EXPECT_EQ(run_tool("rates --set model.E_C=1 --set model.E_J=0.1 --set model.N=10000 --set model.nbar=400 "
                     "--set model.lambda=0.01 --set bath.g2=1 --set bath.r=1 --format both --out \"" +
                     dir.path.string() + "\""),
            0);
  const std::string csv = slurp(dir.path / "rates.csv");
  EXPECT_EQ(csv.rfind("# scb-rates v1\nE_C,E_J,", 0), 0u) << csv.substr(0, 60);
  const std::string json = slurp(dir.path / "rates.json");
  EXPECT_NE(json.find("\"schema\": \"scb-rates\""), std::string::npos);
}

TEST(CliEvolve, FockAndCoherentFitsMatchTheRates) {
  for (const char* state : {"fock", "coherent"}) {
    TempDir dir(std::string("evolve_") + state);
    const std::string args = std::string("evolve --set model.E_C=1 --set model.K=0.01 --set model.N=30 ") +
                             "--set model.nbar=15 --set model.lambda=0.1 --set bath.g2=10000 --set bath.r=0.1 " +
                             "--set evolve.state=" + state + " --format csv --out \"" + dir.path.string() + "\"";
    ASSERT_EQ(run_tool(args), 0) << state;
    std::istringstream csv(slurp(dir.path / "evolve.csv"));
    std::string version, header, values;
    std::getline(csv, version);
    std::getline(csv, header);
    std::getline(csv, values);
    auto column = [&](const std::string& name) {
      std::istringstream h(header), v(values);
      std::string hn, vn;
      while (std::getline(h, hn, ',') && std::getline(v, vn, ',')) {
        if (hn == name) return std::stod(vn);
      }
      return std::nan("");
    };
    const double analytic = column("gamma_analytic");
    EXPECT_LT(std::abs(column("gamma_fit") - analytic) / analytic, 0.02) << state;
    EXPECT_LT(std::abs(column("gamma_finite_difference") - analytic) / analytic, 0.01) << state;
    EXPECT_TRUE(fs::exists(dir.path / "trajectory.csv"));
  }
}

TEST(CliEvolve, ClosedEigenstateSurvives) {
  TempDir dir("evolve_closed");
  const std::string args = "evolve --set model.E_C=1 --set model.K=0 --set model.N=10 --set model.nbar=5 "
                           "--set model.n_g=0.3 --set evolve.state=fock --format csv --out \"" +
                           dir.path.string() + "\"";
  ASSERT_EQ(run_tool(args), 0);
  const std::string csv = slurp(dir.path / "evolve.csv");
  const auto last = csv.rfind(',');
  EXPECT_GE(std::stod(csv.substr(csv.rfind(',', last - 1) + 1)), 0.999);
}

TEST(CliEvolve, OversizedStepExits4) {
  std::string err;
  EXPECT_EQ(run_tool("evolve --set model.E_C=1 --set model.K=0.01 --set model.N=10 --set model.nbar=5 "
                     "--set model.lambda=0.1 --set bath.g2=1 --set bath.r=1 --set evolve.dt=10",
                     &err),
            4);
  EXPECT_NE(err.find("error[step]"), std::string::npos) << err;
}

TEST(CliSweep, RatioApproachesAsymptote) {
  RunConfig c = from_text(std::string(kDesk) +
                          "sweep.axis = r\nsweep.min = 0.1\nsweep.max = 100\nsweep.points = 13\nsweep.scale = log\n");
  const Table t = sweep_table(c, 2);
  ASSERT_EQ(t.rows.size(), 13u);
  double prev = 1.0;
  for (const Row& row : t.rows) {
    const double z = number(row, "z");
    if (z < 20.0) continue;
    const double dev = std::abs(number(row, "ratio") / (std::sqrt(2.0 / std::numbers::pi) * z) - 1.0);
    EXPECT_LT(dev, 0.05) << z;
    EXPECT_LT(dev, prev) << z;
    prev = dev;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(CliSweep, SinglePointMatchesRates) {
  RunConfig c = from_text(std::string(kDesk) + "sweep.axis = r\nsweep.min = 1\nsweep.max = 1\nsweep.points = 1\n");
  const Table s = sweep_table(c, 1);
  const Table r = rates_table(c);
  ASSERT_EQ(s.rows.size(), 1u);
  const Row& rates = r.rows.front();
  const Row& sweep = s.rows.front();
  ASSERT_EQ(sweep.size(), rates.size() + 3);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    EXPECT_EQ(sweep[i + 3].name, rates[i].name);
    EXPECT_TRUE(sweep[i + 3].value == rates[i].value) << rates[i].name;
  }
}

TEST(CliSweep, RatioGrowsAsSquareRootOfNbar) {
  RunConfig c = from_text("model.E_C = 1\nmodel.E_J = 0.1\nmodel.N = 1000000\nmodel.lambda = 0.01\nbath.g2 = 1\n"
                          "bath.r = 1\nsweep.axis = nbar\nsweep.min = 1000\nsweep.max = 100000\nsweep.points = 9\n");
  const Table t = sweep_table(c, 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const Row& row : t.rows) {
    const double x = std::log(number(row, "nbar"));
    const double y = std::log(number(row, "ratio"));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double n = static_cast<double>(t.rows.size());
  EXPECT_NEAR((n * sxy - sx * sy) / (n * sxx - sx * sx), 0.5, 0.02);
}

TEST(CliSweep, ThreadCountDoesNotChangeRows) {
  RunConfig c = from_text(std::string(kDesk) +
                          "sweep.axis = ec_over_ej\nsweep.min = 1\nsweep.max = 100\nsweep.points = 7\n");
  const Table a = sweep_table(c, 1);
  const Table b = sweep_table(c, 4);
  std::ostringstream sa, sb;
  write_csv(sa, a);
  write_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(CliSweep, GridEndpointsAndValidation) {
  SweepInputs s;
  s.axis = SweepAxis::kR;
  s.min = 0.1;
  s.max = 100.0;
  s.points = 4;
  const auto g = sweep_grid(s);
  EXPECT_EQ(g.front(), 0.1);
  EXPECT_EQ(g.back(), 100.0);
  EXPECT_NEAR(g[1], 1.0, 1e-12);
  s.min = -1.0;
  EXPECT_THROW(sweep_grid(s), ConfigError);
  s.log_scale = false;
  EXPECT_NO_THROW(sweep_grid(s));
  s.max = -2.0;
  EXPECT_THROW(sweep_grid(s), ConfigError);
}

TEST(CliSweep, UnknownAxisExits2) {
  std::string err;
  EXPECT_EQ(run_tool("sweep --set sweep.axis=temperature", &err), 2);
  EXPECT_NE(err.find("sweep.axis"), std::string::npos) << err;
}

TEST(CliSweep, WritesPlot) {
  TempDir dir("sweep");
  const std::string args = "sweep --set model.E_C=1 --set model.E_J=0.1 --set model.N=10000 --set model.nbar=400 "
                           "--set model.lambda=0.01 --set bath.g2=1 --set sweep.axis=r --set sweep.min=0.1 "
                           "--set sweep.max=100 --set sweep.points=7 --out \"" + dir.path.string() + "\"";
  ASSERT_EQ(run_tool(args), 0);
  const std::string svg = slurp(dir.path / "sweep.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("sqrt(2/pi) z"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_EQ(slurp(dir.path / "sweep.csv").rfind("# scb-sweep v1\nindex,axis,value,", 0), 0u);
}

TEST(CliMeanfield, DefaultRunAndSchema) {
  TempDir dir("meanfield");
  const std::string args = "meanfield --set model.E_C=10 --set model.E_J=1 --set model.N=200 --set model.nbar=100 "
                           "--set meanfield.periods=30 --format csv --out \"" + dir.path.string() + "\"";
  ASSERT_EQ(run_tool(args), 0);
  const std::string traj = slurp(dir.path / "meanfield.csv");
  EXPECT_EQ(traj.rfind("# scb-meanfield v1\nt,re_psi_l,im_psi_l,re_psi_r,im_psi_r,theta,n_l,hamiltonian,e_gp\n", 0), 0u);
  std::istringstream report(slurp(dir.path / "meanfield_report.csv"));
  std::string version, header, values;
  std::getline(report, version);
  std::getline(report, header);
  std::getline(report, values);
  std::istringstream h(header), v(values);
  std::string hn, vn;
  double deviation = 1.0;
  while (std::getline(h, hn, ',') && std::getline(v, vn, ',')) {
    if (hn == "relative_deviation") deviation = std::stod(vn);
  }
  EXPECT_LT(deviation, 0.01);
}

TEST(CliMeanfield, NoTunnelingExits5) {
  std::string err;
  EXPECT_EQ(run_tool("meanfield --set model.E_C=10 --set model.E_J=0 --set model.N=200 --set model.nbar=100", &err), 5);
  EXPECT_NE(err.find("error[no-oscillation]"), std::string::npos) << err;
}

TEST(CliEstimate, ReferenceRow) {
  const Table t = estimate_table(from_text("model.E_C = 1e11\nmodel.E_J = 1e10\nmodel.nbar = 1e8\nbath.r = 1\n"));
  const Row* fock = find_quantity(t, "gamma_fock_over_EJ");
  const Row* tf = find_quantity(t, "tau_fock");
  const Row* tc = find_quantity(t, "tau_coherent");
  ASSERT_TRUE(fock && tf && tc);
  EXPECT_NEAR(number(*fock, "order_of_magnitude"), 0.1, 1e-15);
  EXPECT_NEAR(number(*fock, "leading_order"), 0.1, 1e-12);
  EXPECT_GT(number(*tf, "value"), 0.5e-9);
  EXPECT_LT(number(*tf, "value"), 2e-9);
  EXPECT_GT(number(*tc, "value"), 1e-5 / 3.0);
  EXPECT_LT(number(*tc, "value"), 3e-5);
}

TEST(CliEstimate, Scalings) {
  const std::string base = "model.E_C = 1e11\nmodel.E_J = 1e10\n";
  const Table a = estimate_table(from_text(base + "model.nbar = 1e8\nbath.r = 1\n"));
  const Table r10 = estimate_table(from_text(base + "model.nbar = 1e8\nbath.r = 10\n"));
  const Table big = estimate_table(from_text(base + "model.nbar = 1e10\nbath.r = 1\n"));
  const Row& tf = *find_quantity(a, "tau_fock");
  const Row& tf10 = *find_quantity(r10, "tau_fock");
  EXPECT_NEAR(number(tf, "leading_order") / number(tf10, "leading_order"), 10.0, 1e-9);
  EXPECT_NEAR(number(tf, "order_of_magnitude") / number(tf10, "order_of_magnitude"), 10.0, 1e-9);
  const Row& tc = *find_quantity(a, "tau_coherent");
  const Row& tcb = *find_quantity(big, "tau_coherent");
  EXPECT_NEAR(number(tcb, "order_of_magnitude") / number(tc, "order_of_magnitude"), 10.0, 1e-9);
  EXPECT_NEAR(number(tcb, "leading_order") / number(tc, "leading_order"), 10.0, 0.01);
}

TEST(CliEstimate, RequiresInputs) {
  EXPECT_THROW(estimate_table(from_text("model.E_C = 1e11\nmodel.E_J = 1e10\nbath.r = 1\n")), ConfigError);
  EXPECT_THROW(estimate_table(from_text("model.E_C = 1e11\nmodel.E_J = 1e10\nmodel.nbar = 1e8\n")), ConfigError);
}

TEST(CliDeterminism, RepeatedRunsAreByteIdentical) {
  TempDir dir("determinism");
  const std::string base = "sweep --set model.E_C=1 --set model.E_J=0.1 --set model.N=10000 --set model.nbar=400 "
                           "--set model.lambda=0.01 --set bath.g2=1 --set sweep.axis=r --set sweep.min=0.1 "
                           "--set sweep.max=10 --set sweep.points=5 --out \"";
  ASSERT_EQ(run_tool(base + (dir.path / "a").string() + "\""), 0);
  ASSERT_EQ(run_tool(base + (dir.path / "b").string() + "\""), 0);
  for (const char* f : {"sweep.csv", "sweep.json", "sweep.svg"}) {
    EXPECT_EQ(slurp(dir.path / "a" / f), slurp(dir.path / "b" / f)) << f;
  }
}
