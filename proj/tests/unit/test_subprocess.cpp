#include <doctest.h>

#include <chrono>

#include "sv2svt/error.hpp"
#include "sv2svt/subprocess.hpp"
#include "test_support.hpp"

using namespace sv2svt;
using namespace std::chrono_literals;

TEST_CASE("captures exit code and both streams") {
  const auto r = run_process({"/bin/sh", "-c", "echo out; echo err >&2; exit 3"}, std::nullopt, 10s);
  CHECK(r.exit_code == 3);
  CHECK_FALSE(r.timed_out);
  CHECK(r.out == "out\n");
  CHECK(r.err == "err\n");
}

TEST_CASE("feeds stdin and handles large output") {
  std::string big(300000, 'x');
  const auto r = run_process({"/bin/cat"}, big, 10s);
  CHECK(r.exit_code == 0);
  CHECK(r.out == big);

  const auto empty = run_process({"/bin/cat"}, std::nullopt, 10s);
  CHECK(empty.out.empty());
}

TEST_CASE("kills a child past its timeout") {
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_process({"/bin/sh", "-c", "sleep 10"}, std::nullopt, 200ms);
  CHECK(r.timed_out);
  CHECK(r.exit_code == -1);
  CHECK(std::chrono::steady_clock::now() - start < 5s);
}

TEST_CASE("a missing executable is an adapter error") {
  CHECK_THROWS_AS(run_process({"/nonexistent/tool"}, std::nullopt, 1s), AdapterError);
  CHECK_THROWS_AS(run_process({}, std::nullopt, 1s), AdapterError);
}

TEST_CASE("command splitting") {
  CHECK(split_command("a  b\tc") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_command(R"("/opt/my tool" --x 'a b' c\ d "q\"x")") ==
        std::vector<std::string>{"/opt/my tool", "--x", "a b", "c d", "q\"x"});
  CHECK(split_command(R"(x "" y)") == std::vector<std::string>{"x", "", "y"});
  CHECK(split_command("   ").empty());
  CHECK_THROWS_AS(split_command("a 'b"), ConfigError);
  CHECK_THROWS_AS(split_command("a \"b"), ConfigError);
}

TEST_CASE("executable lookup") {
  CHECK(find_executable("sh", "/").has_value());
  CHECK(find_executable("/bin/sh", "/tmp") == std::filesystem::path("/bin/sh"));
  CHECK(find_executable("./sh", "/bin") == std::filesystem::path("/bin/sh"));
  CHECK_FALSE(find_executable("no-such-tool-anywhere", "/").has_value());
  const auto dir = support::scratch_dir("find_executable");
  sv2svt::write_file(dir / "data.txt", "x");
  std::filesystem::permissions(dir / "data.txt", std::filesystem::perms::owner_read | std::filesystem::perms::owner_write);
  CHECK_FALSE(find_executable("./data.txt", dir).has_value());
  CHECK_FALSE(find_executable("./", dir).has_value());
}
