#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "graft/config.hpp"
#include "graft/error.hpp"

using namespace graft;

TEST_CASE("defaults validate") {
  TransferConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.theta == 2);
  CHECK(c.lambda == 0.1);
  CHECK(c.d1 == 16);
  CHECK(c.d2 == 16);
  CHECK(c.z_entity == 1.96);
  CHECK(c.mu_mode == MuMode::automatic);
}

TEST_CASE("set and validate") {
  TransferConfig c;
  c.set("mu", "0.4");
  CHECK(c.mu_mode == MuMode::fixed);
  CHECK(c.mu_value == 0.4);
  c.set("mu", "auto");
  CHECK(c.mu_mode == MuMode::automatic);
  c.set("lambda_dcm", "0.5");
  CHECK(c.dcm_lambda() == 0.5);
  CHECK(c.eem_lambda() == 0.1);
  CHECK_THROWS_AS(c.set("nope", "1"), Error);
  CHECK_THROWS_AS(c.set("d1", "1.5"), Error);
  CHECK_THROWS_AS(c.set("lambda", "abc"), Error);

  auto invalid = [](const char* key, const char* value) {
    TransferConfig t;
    t.set(key, value);
    return t;
  };
  CHECK_THROWS_AS(invalid("theta", "3").validate(), Error);
  CHECK_THROWS_AS(invalid("mu", "1.2").validate(), Error);
  CHECK_THROWS_AS(invalid("z_entity", "0").validate(), Error);
  CHECK_THROWS_AS(invalid("eem_tol", "0").validate(), Error);
  CHECK_THROWS_AS(invalid("max_path_len", "1").validate(), Error);
}

TEST_CASE("load_config") {
  const auto dir = std::filesystem::temp_directory_path() / "graft_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "good.cfg");
    out << "# tuned\n\nd2 = 8\nmu=0.3\n";
  }
  TransferConfig c = load_config(dir / "good.cfg");
  CHECK(c.d2 == 8);
  CHECK(c.mu_value == 0.3);
  {
    std::ofstream out(dir / "bad.cfg");
    out << "d2 = 8\nbogus\n";
  }
  try {
    load_config(dir / "bad.cfg");
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), Error);

  nlohmann::json j = c;
  CHECK(j["d2"] == 8);
  CHECK(j["mu_mode"] == "fixed");
}
