#include <doctest.h>

#include <sstream>

#include "cli.hpp"

using commsol::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("documented examples") {
  CHECK(call({"tomatrix", "comm Z 1;2/1"}).out == "2/1\n");
  CHECK(call({"enumerate", "F", "2", "--max-index", "3"}).out == "1:1 2:3 3:13\n");
  const auto d = call({"dpro", "Z", "1", "--depth", "5", "0", "12"});
  CHECK(d.code == 0);
  CHECK(d.out.rfind("exp(-4) = 0.0183156", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"frobnicate"}).err.find("unknown verb") != std::string::npos);
  CHECK(call({"index", "F"}).code == 2);
  CHECK(call({"index", "Q", "2", "a"}).code == 2);
  CHECK(call({"dpro", "Z", "1", "0", "1", "--depth", "0"}).code == 2);
  CHECK(call({"dpro", "Z", "1", "0", "1", "--format", "xml"}).code == 2);

  const auto inf = call({"index", "F", "2", "ab"});
  CHECK(inf.code == 1);
  CHECK(inf.err.find('\n') == inf.err.size() - 1);
  CHECK(call({"tomatrix", "catalog:1"}).code == 1);
  CHECK(call({"parse", "/nonexistent/file.comm"}).code == 1);
  CHECK(call({"cofinal", "Z", "1", "even", "--depth", "6"}).code == 1);
  CHECK(call({"compose", "catalog:1", "comm Z 1;2"}).code == 1);
}

TEST_CASE("subgroup verbs") {
  CHECK(call({"index", "F", "2", "aa,b,abA"}).out == "index 2\n");
  CHECK(call({"index", "Z", "2", "(2,0),(0,3)", "--format", "lines"}).out == "6\n");
  CHECK(call({"intersect", "F", "2", "aa,b,abA", "a,bb,baB"}).out.find("index 4") != std::string::npos);
  CHECK(call({"basis", "F", "2", "<aa,b,abA>"}).out == "b\naa\nabA\n");
  CHECK(call({"kernel", "Z", "1", "--depth", "5"}).out == "index 60\nsubgroup <(60)>\n");
  CHECK(call({"cover", "F", "2", "aa,b,abA"}).out == "cover 2 sheets\na: 2 1\nb: 1 2\n");
}

TEST_CASE("commensuration verbs") {
  CHECK(call({"equiv", "catalog:5", "catalog:7"}).out == "equivalent\n");
  CHECK(call({"equiv", "catalog:0", "catalog:1", "--format", "lines"}).out == "false\n");
  CHECK(call({"invert", "comm Z 2;1/2 0;0 3"}).out == "comm Z 2\n2/1 0/1\n0/1 1/3\n");
  const auto z = call({"zeta", "comm Z 1;2", "--depth", "2"});
  CHECK(z.out.find("idx=1 index=2") != std::string::npos);
  CHECK(z.out.find("comp 1:") != std::string::npos);
  CHECK(call({"reconstruct", "comm Z 1;2", "--depth", "3"}).out == "comm Z 1\n2/1\n");
  CHECK(call({"cofinal", "F", "2", "index>=3", "--depth", "4"}).code == 0);
  CHECK(call({"lift", "catalog:1", "aa,b,abA", "a,bb,baB"}).out.find("unique yes") != std::string::npos);
  CHECK(call({"lift", "catalog:1", "aa,b,abA", "aa,b,abA"}).code == 1);
}

TEST_CASE("solenoid and geometry verbs") {
  CHECK(call({"baseleaf", "F", "2", "1"}).out == "solpoint N=2 cosets=[0,0,0,0] leaf=1\n");
  CHECK(call({"sigma", "Z", "1", "0", "12", "--depth", "5", "--format", "lines"}).out ==
        "value=exp(-4)\nargmin=(0)\n");
  CHECK(call({"sigma", "F", "2", "solpoint N=2 cosets=[0,0,0,0] leaf=a@1/4", "1"}).out.find("sigma 1/4") == 0);
  CHECK(call({"ball", "Z", "1", "0.1", "--depth", "4"}).out.find("components 2") == 0);
  CHECK(call({"ball", "F", "2", "0.2"}).code == 1);
  CHECK(call({"qi", "comm Z 1;2", "--radius", "5", "--format", "lines"}).out == "L=2\nC=0\npairs=55\n");
  CHECK(call({"qi", "catalog:0", "--radius", "7"}).code == 1);
  CHECK(call({"bounded", "catalog:2", "catalog:13", "--radius", "8"}).out.find("bound ") != std::string::npos);
  CHECK(call({"factor", "catalog:7", "--depth", "2", "--radius", "5"}).out.find("mismatches 0") != std::string::npos);
  CHECK(call({"fixpoint", "F", "2", "a", "--repelling"}).out == "u=1 c=A\n");
  CHECK(call({"fixpoint", "F", "2", "1"}).code == 1);
  CHECK(call({"baction", "catalog:2", "u=1", "c=b"}).out == "u=a c=b\n");
  CHECK(call({"baction", "catalog:0", "Aba"}).out == "u=A c=b\n");
}

TEST_CASE("machine-readable output round trips") {
  std::ostringstream log;
  CHECK_MESSAGE(commsol::cli::round_trip(log), log.str());
}
