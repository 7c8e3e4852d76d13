#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hsmc/kripke.hpp"
#include "hsmc/snsat.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + std::string(HSMC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(HSMC_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Validates `value` against the subset of JSON Schema the shipped schema
// uses: type (string or list), enum, required, properties,
// additionalProperties (false or a schema), items, pattern, $ref into
// #/definitions.
void validate_schema(const json& schema, const json& root, const json& value,
                     const std::string& where) {
  INFO("at ", where);

  if (schema.contains("$ref")) {
    std::string ref = schema["$ref"];
    REQUIRE(ref.rfind("#/definitions/", 0) == 0);
    validate_schema(root["definitions"][ref.substr(14)], root, value, where);
    return;
  }

  if (schema.contains("type")) {
    auto matches = [&](const std::string& t) {
      if (t == "object") return value.is_object();
      if (t == "array") return value.is_array();
      if (t == "string") return value.is_string();
      if (t == "integer") return value.is_number_integer();
      if (t == "number") return value.is_number();
      if (t == "boolean") return value.is_boolean();
      if (t == "null") return value.is_null();
      return false;
    };
    bool ok = false;
    if (schema["type"].is_string()) {
      ok = matches(schema["type"]);
    } else {
      for (const auto& t : schema["type"]) ok = ok || matches(t);
    }
    CHECK_MESSAGE(ok, where, ": type mismatch, got ", value.dump());
    if (!ok) return;
  }

  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& option : schema["enum"]) ok = ok || option == value;
    CHECK_MESSAGE(ok, where, ": ", value.dump(), " not in enum");
  }

  if (schema.contains("pattern") && value.is_string()) {
    CHECK_MESSAGE(std::regex_search(value.get<std::string>(),
                                    std::regex(schema["pattern"].get<std::string>())),
                  where, ": '", value.get<std::string>(), "' fails pattern");
  }

  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& req : schema["required"])
        CHECK_MESSAGE(value.contains(req.get<std::string>()), where, ": missing field '",
                      req.get<std::string>(), "'");
    const json props = schema.value("properties", json::object());
    for (const auto& [key, sub] : value.items()) {
      if (props.contains(key)) {
        validate_schema(props[key], root, sub, where + "." + key);
      } else if (schema.contains("additionalProperties")) {
        if (schema["additionalProperties"].is_boolean()) {
          CHECK_MESSAGE(schema["additionalProperties"].get<bool>(), where,
                        ": unexpected field '", key, "'");
        } else {
          validate_schema(schema["additionalProperties"], root, sub, where + "." + key);
        }
      }
    }
  }

  if (value.is_array() && schema.contains("items"))
    for (std::size_t i = 0; i < value.size(); ++i)
      validate_schema(schema["items"], root, value[i], where + "[" + std::to_string(i) + "]");
}

void check_report(const std::string& args, const std::string& env = "") {
  static const json schema = json::parse(slurp(HSMC_SCHEMA_PATH));
  RunResult r = run_cli(args, env);
  INFO("command: ", args);
  REQUIRE_FALSE(r.out.empty());
  json report = json::parse(r.out);
  validate_schema(schema, schema, report, "$");
}

}  // namespace

TEST_CASE("check exit codes follow the verdict") {
  CHECK(run_cli("check " + data("k2.kripke") + " '[B]false -> p'").exit_code == 0);
  CHECK(run_cli("check " + data("k2.kripke") + " '[B]false -> q'").exit_code == 1);

  CHECK(run_cli("check " + data("sched.kripke") + " " + data("sched_two_of_three.hsf") +
                " --formula-file")
            .exit_code == 0);
  CHECK(run_cli("check " + data("sched.kripke") + " " + data("sched_no_starvation.hsf") +
                " --formula-file")
            .exit_code == 1);
  CHECK(run_cli("check " + data("sched.kripke") + " " +
                data("sched_strict_alternation.hsf") + " --formula-file")
            .exit_code == 1);
}

TEST_CASE("usage and parse failures exit with 2") {
  CHECK(run_cli("check " + data("k2.kripke") + " 'p &'").exit_code == 2);
  CHECK(run_cli("check /nonexistent.kripke p").exit_code == 2);
  CHECK(run_cli("check " + data("k2.kripke") + " '<B><E>p'").exit_code == 2);
  CHECK(run_cli("snsat " + data("demo.snsat") + " frobnicate").exit_code == 2);
  CHECK(run_cli("brute --against=checker").exit_code == 2);
}

TEST_CASE("the configuration cap maps to exit 3") {
  RunResult r = run_cli("check " + data("sched.kripke") + " " +
                            data("sched_no_starvation.hsf") + " --formula-file",
                        "HSMC_MAX_CONFIGS=2");
  CHECK(r.exit_code == 3);
}

TEST_CASE("exit codes do not depend on the oracle realization") {
  for (const char* formula : {"'[B]false -> p'", "'[B]false -> q'", "'<A>q -> <A>p'"}) {
    int bfs = run_cli("check " + data("k2.kripke") + " " + formula).exit_code;
    int dfs =
        run_cli("check " + data("k2.kripke") + " " + formula + " --oracle=dfs").exit_code;
    CHECK(bfs == dfs);
  }
}

TEST_CASE("witness printing names the violating initial track") {
  RunResult r = run_cli("check " + data("k2.kripke") + " '[B]false -> q' --witness");
  CHECK(r.out.find("counterexample: v0") != std::string::npos);
}

TEST_CASE("reference checks and differential modes") {
  CHECK(run_cli("brute " + data("k2.kripke") + " '[B]false -> p'").exit_code == 0);
  CHECK(run_cli("brute " + data("k2.kripke") + " '[B]false -> q'").exit_code == 1);
  CHECK(run_cli("brute " + data("k2.kripke") + " '[B]false -> q' --against=checker")
            .exit_code == 0);  // both sides agree on "violated"
  CHECK(run_cli("brute --random 10 --against=checker --seed 5").exit_code == 0);
}

TEST_CASE("instance evaluation prints one assignment per line") {
  RunResult r = run_cli("snsat " + data("demo.snsat") + " eval");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "x1=true\nx2=false\n");
}

TEST_CASE("roundtrip agreement exits cleanly") {
  CHECK(run_cli("snsat " + data("demo.snsat") + " roundtrip").exit_code == 0);
}

TEST_CASE("reduce emits files that re-parse to the same objects") {
  std::string out_k = "/tmp/hsmc_cli_test.kripke";
  std::string out_f = "/tmp/hsmc_cli_test.formula";
  RunResult r = run_cli("snsat " + data("demo.snsat") + " reduce --out-kripke " + out_k +
                        " --out-formula " + out_f);
  CHECK(r.exit_code == 0);

  hsmc::SnsatInstance inst = hsmc::parse_snsat(slurp(data("demo.snsat")));
  hsmc::KripkeStructure expected = hsmc::build_kripke(inst);
  CHECK(hsmc::parse_kripke(slurp(out_k)) == expected);
  CHECK(hsmc::parse_formula(slurp(out_f)) == hsmc::build_phi(inst));
  std::remove(out_k.c_str());
  std::remove(out_f.c_str());
}

TEST_CASE("json reports validate against the shipped schema") {
  check_report("check " + data("k2.kripke") + " '[B]false -> p' --json");
  check_report("check " + data("k2.kripke") + " '[B]false -> q' --json --oracle=dfs");
  check_report("brute " + data("k2.kripke") + " '[B]false -> q' --json");
  check_report("brute " + data("k2.kripke") + " 'p | ~p' --against=checker --json");
  check_report("brute --random 5 --against=checker --json");
  check_report("snsat " + data("demo.snsat") + " eval --json");
  check_report("snsat " + data("demo.snsat") + " roundtrip --json");
  check_report("snsat " + data("demo.snsat") +
               " reduce --out-kripke /tmp/hsmc_schema.k --out-formula /tmp/hsmc_schema.f "
               "--json");
  std::remove("/tmp/hsmc_schema.k");
  std::remove("/tmp/hsmc_schema.f");
}
