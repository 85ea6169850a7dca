#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "aprelax/config.hpp"
#include "aprelax/report.hpp"

using namespace aprelax;

namespace {

StudyRow sample_row(double eps, double phi) {
  StudyRow r;
  r.model = "psystem";
  r.ic = "smooth";
  r.n = 400;
  r.eps = eps;
  r.sigma = 1.0;
  r.gamma = 1.4;
  r.mu = 1.0;
  r.t_final = 1e-2;
  r.cfl = 0.5;
  r.phiT = phi;
  r.steps = 12;
  r.lambda_max = 1.1832159566199232;
  r.ok = true;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Csv, EmptyResultIsHeaderOnly) {
  EXPECT_EQ(csv_text(StudyResult{}),
            "model,ic,N,eps,sigma,gamma,mu,T,cfl,phi0,phiT,steps,lambda_max,rate_group\n");
}

TEST(Csv, OneRowGivesTwoLines) {
  StudyResult r;
  r.rows.push_back(sample_row(1e-2, 3.25e-9));
  const auto text = csv_text(r);
  const auto ls = lines(text);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[1],
            "psystem,smooth,400,1.0000000000000000e-02,1.0000000000000000e+00,"
            "1.3999999999999999e+00,1.0000000000000000e+00,1.0000000000000000e-02,"
            "5.0000000000000000e-01,0.0000000000000000e+00,3.2500000000000002e-09,12,"
            "1.1832159566199232e+00,psystem-smooth-N400");
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(Csv, RealsRoundTripWithSeventeenDigits) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 2.2250738585072014e-308, -2.5e-300}) {
    const auto s = format_real(v);
    EXPECT_EQ(std::stod(s), v) << s;
    EXPECT_TRUE(std::regex_match(s, std::regex(R"(-?\d\.\d{16}e[+-]\d{2,3})"))) << s;
  }
}

TEST(Csv, NoTrailingWhitespaceAndFailedRowsSkipped) {
  StudyResult r;
  r.rows.push_back(sample_row(1e-1, 1e-5));
  auto bad = sample_row(1e-2, 0.0);
  bad.ok = false;
  bad.error = "boom";
  r.rows.push_back(bad);
  r.rows.push_back(sample_row(1e-3, 1e-13));
  const auto ls = lines(csv_text(r));
  ASSERT_EQ(ls.size(), 3u);
  for (const auto& l : ls) {
    EXPECT_FALSE(l.empty());
    EXPECT_FALSE(std::isspace(static_cast<unsigned char>(l.back())));
    EXPECT_EQ(std::count(l.begin(), l.end(), ','), 13);
  }
}

TEST(Csv, EmitIsByteIdenticalOnReemit) {
  StudyResult r;
  r.rows.push_back(sample_row(1e-1, 1e-5));
  const auto dir = std::filesystem::temp_directory_path() / "aprelax_csv_test";
  std::filesystem::remove_all(dir);
  emit_csv(r, dir / "a" / "sweep.csv");
  emit_csv(r, dir / "b.csv");
  EXPECT_EQ(slurp(dir / "a" / "sweep.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "b.csv"), csv_text(r));
  std::filesystem::remove_all(dir);
  EXPECT_THROW(write_file("/proc/aprelax/nope.csv", "x"), std::exception);
}

TEST(Rates, OneLinePerGroup) {
  std::vector<GroupFit> fits(2);
  fits[0].group = "psystem-smooth-N100";
  fits[0].fit = RateFit{4.0, -1.0, 0.01, 5, {1e-4}};
  fits[1].group = "gt-smooth-N100";
  fits[1].error = "too few";
  const auto ls = lines(rates_csv(fits));
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "group,slope,intercept,max_residual,used,excluded");
  EXPECT_EQ(ls[1].substr(0, 43), "psystem-smooth-N100,4.0000000000000000e+00,");
  EXPECT_EQ(ls[1].substr(ls[1].size() - 4), ",5,1");
  EXPECT_EQ(ls[2], "gt-smooth-N100,nan,nan,nan,0,0");
}

TEST(FieldsCsv, ColumnsAndRows) {
  const Grid1D grid(-1, 1, 4);
  PairResult<2> pair;
  pair.hyperbolic = Field<2>(4);
  pair.limit = Field<2>(4);
  for (std::size_t i = 0; i < 4; ++i) {
    pair.hyperbolic[i] = {1.0 + static_cast<double>(i), 0.5};
    pair.limit[i] = {1.0, -0.5};
  }
  const auto ls = lines(fields_csv(PSystem{}, grid, pair));
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "x,tau,u,tau_bar,u_bar");
  EXPECT_EQ(ls[1],
            "-7.5000000000000000e-01,1.0000000000000000e+00,5.0000000000000000e-01,"
            "1.0000000000000000e+00,-5.0000000000000000e-01");
}

TEST(Plot, RejectsResultWithoutPositiveRows) {
  StudyResult r;
  EXPECT_THROW(plot_svg(r), std::invalid_argument);
  r.rows.push_back(sample_row(1e-1, 0.0));
  EXPECT_THROW(plot_svg(r), std::invalid_argument);
}

TEST(Plot, SingleSeriesHasOnePolylineAndGuide) {
  StudyResult r;
  for (double e : {1e-1, 1e-2, 1e-3}) r.rows.push_back(sample_row(e, std::pow(e, 4)));
  const auto svg = plot_svg(r);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(count(svg, "<polyline"), 1u);
  EXPECT_EQ(count(svg, "class=\"guide\""), 1u);
  EXPECT_EQ(count(svg, "<circle"), 3u);
}

TEST(Plot, OneSeriesPerGridAndQuarticGuide) {
  StudyResult r;
  for (std::size_t n : {100u, 200u, 400u, 1600u})
    for (double e : {1e-1, 1e-2, 1e-3}) {
      auto row = sample_row(e, 1e-3 * std::pow(e, 4) / static_cast<double>(n));
      row.n = n;
      r.rows.push_back(row);
    }
  const auto svg = plot_svg(r);
  EXPECT_EQ(count(svg, "<polyline"), 4u);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(
      svg, m,
      std::regex(R"re(data-x0="([^"]+)" data-y0="([^"]+)" data-x1="([^"]+)" data-y1="([^"]+)")re")));
  const double slope = (std::stod(m[4]) - std::stod(m[2])) / (std::stod(m[3]) - std::stod(m[1]));
  EXPECT_NEAR(slope, 4.0, 1e-4);
  // pixel slope matches once the axis scalings are undone
  ASSERT_TRUE(std::regex_search(
      svg, m, std::regex(R"re(x1="([^"]+)" y1="([^"]+)" x2="([^"]+)" y2="([^"]+)" stroke="gray")re")));
  EXPECT_LT(std::stod(m[2]), std::stod(m[4]));
}

TEST(Config, ParsesKeysListsAndComments) {
  Settings s;
  apply_config_text(s,
                    "# header comment\n"
                    "model = psystem, euler   # trailing\n"
                    "ic=smooth\n"
                    "\n"
                    "n = 100,200\n"
                    "eps = 1e-1, 1e-2, 1e-3\n"
                    "sigma = 2\n"
                    "boundary = periodic\n"
                    "seed = 7\n"
                    "cases = 12\n"
                    "out = results\n");
  EXPECT_EQ(s.study.models, (std::vector<ModelName>{ModelName::PSystem, ModelName::IsentropicEuler}));
  EXPECT_EQ(s.study.ics, (std::vector<InitialKind>{InitialKind::Smooth}));
  EXPECT_EQ(s.study.n_list, (std::vector<std::size_t>{100, 200}));
  EXPECT_EQ(s.study.eps_list, (std::vector<double>{1e-1, 1e-2, 1e-3}));
  EXPECT_EQ(s.study.sigma, 2.0);
  EXPECT_EQ(s.study.boundary, BoundaryMode::Periodic);
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.cases, 12u);
  EXPECT_EQ(s.out, "results");
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  Settings s;
  EXPECT_THROW(apply_config_text(s, "nosuch = 1\n"), config_error);
  EXPECT_THROW(apply_config_text(s, "sigma\n"), config_error);
  EXPECT_THROW(apply_config_text(s, "model = nosuch\n"), config_error);
  EXPECT_THROW(apply_config_text(s, "sigma = abc\n"), config_error);
  EXPECT_THROW(apply_config_text(s, "n = -3\n"), config_error);
  EXPECT_THROW(apply_config_text(s, "boundary = wrap\n"), config_error);
  EXPECT_THROW(apply_config_file(s, "/nonexistent/aprelax.cfg"), config_error);
  try {
    apply_config_text(s, "sigma = abc\n");
  } catch (const config_error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("sigma:", 0), 0u) << e.what();
  }
}

TEST(Config, DumpRoundTripsExactly) {
  Settings s;
  apply_config_text(s,
                    "model = gt, visco\nic = discontinuous\nn = 50, 150\neps = 0.3, 0.1\n"
                    "sigma = 0.7\ngamma = 1.6666666666666667\nmu = 0.1\ntau_star = 0.9\n"
                    "t_final = 0.02\ncfl = 0.4\nboundary = periodic\ndomain_a = -2\ndomain_b = 3\n"
                    "diffusion_number = 0\nphi_floor = 1e-30\nseed = 99\ncases = 5\nout = x/y\n");
  const auto dumped = dump_config(s);
  Settings back;
  apply_config_text(back, dumped);
  EXPECT_EQ(dump_config(back), dumped);
  EXPECT_EQ(back.study.gamma, s.study.gamma);
  EXPECT_EQ(back.study.eps_list, s.study.eps_list);
  EXPECT_EQ(back.study.models, s.study.models);
  EXPECT_EQ(back.study.diffusion_number, 0.0);
  // every key is dumped
  for (const auto& key : config_keys()) EXPECT_NE(dumped.find(key + " = "), std::string::npos) << key;
  Settings defaults;
  Settings again;
  apply_config_text(again, dump_config(defaults));
  EXPECT_EQ(dump_config(again), dump_config(defaults));
}
