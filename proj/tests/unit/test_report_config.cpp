#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>

#include "bose/report.hpp"
#include "config.hpp"

using namespace bose;

TEST_CASE("CSV quoting follows RFC 4180") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
  std::ostringstream os;
  CsvWriter w(os, {"x", "label"});
  w.row({"1", "a,b"});
  CHECK(os.str() == "x,label\r\n1,\"a,b\"\r\n");
  CHECK_THROWS(w.row({"only one"}));
}

TEST_CASE("doubles round-trip") {
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, -2.5e-300}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(NAN) == "nan");
}

TEST_CASE("JSON lines carry the schema first") {
  std::ostringstream os;
  JsonLines jl(os);
  jl.write({{"value", 1.5}, {"name", "x"}});
  jl.write({{"value", INFINITY}});
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("{\"schema\":1,", 0) == 0);
  auto j = json::parse(line);
  CHECK(j["value"] == 1.5);
  std::getline(in, line);
  CHECK(json::parse(line)["value"].is_null());
}

TEST_CASE("config parsing") {
  std::istringstream in("# experiment\n\nbeta = 2.0\n  N-seq = 2^7..2^9  \n");
  auto e = cli::read_config(in, "test.cfg");
  REQUIRE(e.size() == 2);
  CHECK(e[0].key == "beta");
  CHECK(e[0].value == "2.0");
  CHECK(e[1].line == 4);

  std::istringstream dup("beta = 1\nbeta = 2\n");
  try {
    cli::read_config(dup, "dup.cfg");
    FAIL("expected duplicate key error");
  } catch (const cli::ConfigError& err) {
    CHECK(std::string(err.what()).find("dup.cfg:2") != std::string::npos);
  }
  std::istringstream noeq("beta 1\n");
  CHECK_THROWS_AS(cli::read_config(noeq, "x"), cli::ConfigError);
}

TEST_CASE("flags override config values") {
  CLI::App app;
  double beta = 0.0;
  long N = 0;
  app.add_option("--beta", beta)->check(CLI::PositiveNumber);
  app.add_option("--N", N);
  const char* argv[] = {"prog", "--beta", "3"};
  app.parse(3, const_cast<char**>(argv));
  std::istringstream in("beta = 1\nN = 64\n");
  cli::apply_config(app, cli::read_config(in, "c"), "c");
  CHECK(beta == 3.0);
  CHECK(N == 64);

  CLI::App app2;
  double b2 = 0.0;
  app2.add_option("--beta", b2)->check(CLI::PositiveNumber);
  const char* argv2[] = {"prog"};
  app2.parse(1, const_cast<char**>(argv2));
  std::istringstream bad("\nbeta = -1\n");
  try {
    cli::apply_config(app2, cli::read_config(bad, "b.cfg"), "b.cfg");
    FAIL("expected validation error");
  } catch (const cli::ConfigError& err) {
    std::string msg = err.what();
    CHECK(msg.find("b.cfg:2") != std::string::npos);
    CHECK(msg.find("beta") != std::string::npos);
  }
}

TEST_CASE("N sequences") {
  CHECK(cli::parse_n_sequence("2^7..2^9") == std::vector<long>{128, 256, 512});
  CHECK(cli::parse_n_sequence("10, 20,40") == std::vector<long>{10, 20, 40});
  CHECK_THROWS(cli::parse_n_sequence("10,10"));
  CHECK_THROWS(cli::parse_n_sequence("20,10"));
  CHECK_THROWS(cli::parse_n_sequence("0,10"));
  CHECK_THROWS(cli::parse_n_sequence("a,b"));
}
