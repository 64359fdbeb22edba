// excol: construct and certify exceptional collections of line bundles on
// blow-ups of toric projective bundles.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "excol/excol.hpp"

namespace {

using namespace excol;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitMutationFailed = 3;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

IntVec parse_ints(const std::string& s) {
  IntVec out;
  for (const auto& item : split_csv(s)) {
    std::size_t used = 0;
    const long long v = std::stoll(item, &used);
    if (used != item.size()) throw InvalidSpec("not an integer: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void write_json(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

CohomologyOracle make_oracle(bool use_cache) {
  if (!use_cache) return CohomologyOracle{};
  return CohomologyOracle{DiskCache(DiskCache::default_dir())};
}

struct ConstructArgs {
  int base_dim = 1;
  std::string fiber_degrees;
  std::string center;
  std::string out;
  bool no_cache = false;
};

int cmd_construct(const ConstructArgs& a) {
  BundleSpec spec;
  CenterSpec center;
  std::optional<BlowupSetup> setup;
  try {
    spec.s = a.base_dim;
    spec.fiber_degrees = parse_ints(a.fiber_degrees);
    center.ray_names = split_csv(a.center);
    setup.emplace(make_blowup(spec, center));
  } catch (const std::exception& e) {
    std::cerr << "excol construct: " << e.what() << "\n";
    return kExitBadInput;
  }
  CohomologyOracle oracle = make_oracle(!a.no_cache);
  MutationEngine engine(*setup, oracle);
  CollectionDocument doc{spec, setup->center, {}, "complete", std::nullopt};
  int code = kExitOk;
  try {
    doc.collection = engine.construct();
  } catch (const ScriptFailure& e) {
    doc.collection = e.partial();
    doc.status = "failed";
    doc.error = e.what();
    std::cerr << "excol construct: mutation failed: " << e.what() << "\n";
    code = kExitMutationFailed;
  }
  write_json(document_to_json(doc), a.out);
  if (code == kExitOk)
    std::cerr << "constructed " << doc.collection.objects.size() << " line bundles with "
              << doc.collection.log.size() << " rule applications\n";
  return code;
}

struct VerifyArgs {
  std::string collection;
  std::string out;
  bool no_cache = false;
};

int cmd_verify(const VerifyArgs& a) {
  CollectionDocument doc;
  std::optional<BlowupSetup> setup;
  try {
    std::ifstream f(a.collection);
    if (!f) throw std::runtime_error("cannot read " + a.collection);
    doc = document_from_json(json::parse(f));
    setup.emplace(make_blowup(doc.spec, doc.center));
    line_classes(doc.collection.objects);
  } catch (const std::exception& e) {
    std::cerr << "excol verify: " << e.what() << "\n";
    return kExitBadInput;
  }
  CohomologyOracle oracle = make_oracle(!a.no_cache);
  const Report rep = certify(oracle, setup->blowup_fan, doc.collection, expected_length(doc.spec, doc.center));
  json out = report_to_json(rep, collection_hash(doc.collection));
  if (!doc.collection.log.empty()) {
    MutationEngine engine(*setup, oracle);
    const auto bad = engine.recheck_log(doc.collection);
    out["log_reproduces"] = !bad.has_value();
    if (bad) out["log_first_mismatch"] = *bad;
  }
  write_json(out, a.out);
  const bool ok = rep.all_passed() && out.value("log_reproduces", true);
  std::cerr << (ok ? "all checks passed" : "checks failed") << " (" << rep.violations.size() << " violations)\n";
  return ok ? kExitOk : kExitCheckFailed;
}

struct SweepArgs {
  int max_dim = 3;
  int max_degree = 1;
  std::string codim = "both";
  unsigned jobs = 1;
  bool no_cache = false;
};

std::string center_label(const CenterSpec& c) {
  std::string out;
  for (const auto& n : c.ray_names) out += (out.empty() ? "" : ",") + n;
  return out;
}

std::string degrees_label(const IntVec& d) {
  std::string out;
  for (auto v : d) out += (out.empty() ? "" : ",") + std::to_string(v);
  return out;
}

int cmd_sweep(const SweepArgs& a) {
  std::vector<int> codims;
  if (a.codim == "2") codims = {2};
  else if (a.codim == "3") codims = {3};
  else if (a.codim == "both") codims = {2, 3};
  else {
    std::cerr << "excol sweep: --codim must be 2, 3 or both\n";
    return kExitBadInput;
  }
  const auto cases = enumerate_cases(a.max_dim, a.max_degree, codims);
  if (cases.empty()) {
    std::cout << "no cases: no centers of the requested codimension exist in this range\n";
    return kExitOk;
  }
  CohomologyOracle oracle = make_oracle(!a.no_cache);
  const auto results = run_sweep(oracle, cases, a.jobs);
  std::cout << std::left << std::setw(4) << "s" << std::setw(12) << "degrees" << std::setw(12) << "center"
            << std::setw(4) << "c" << std::setw(8) << "length" << std::setw(6) << "exc" << std::setw(6) << "semi"
            << std::setw(8) << "strong" << std::setw(6) << "gram" << std::setw(9) << "seconds"
            << "status\n";
  std::size_t failed = 0;
  for (const auto& r : results) {
    auto flag = [&](bool Report::*f) { return r.report ? ((*r.report).*f ? "yes" : "NO") : "-"; };
    std::cout << std::left << std::setw(4) << r.job.spec.s << std::setw(12) << degrees_label(r.job.spec.fiber_degrees)
              << std::setw(12) << center_label(r.job.center) << std::setw(4) << r.job.codim << std::setw(8)
              << (r.report ? std::to_string(r.report->length_actual) : "-") << std::setw(6)
              << flag(&Report::exceptional) << std::setw(6) << flag(&Report::semiorthogonal) << std::setw(8)
              << flag(&Report::strong) << std::setw(6) << flag(&Report::gram_unimodular) << std::setw(9)
              << std::fixed << std::setprecision(3) << r.seconds << (r.passed() ? "pass" : "FAIL");
    if (r.error) std::cout << "  " << *r.error;
    std::cout << "\n";
    failed += !r.passed();
  }
  std::cout << results.size() - failed << "/" << results.size() << " cases passed\n";
  if (failed) {
    std::cout << "failing cases:\n";
    for (const auto& r : results)
      if (!r.passed())
        std::cout << "  s=" << r.job.spec.s << " degrees=" << degrees_label(r.job.spec.fiber_degrees)
                  << " center=" << center_label(r.job.center) << "\n";
  }
  return failed ? kExitCheckFailed : kExitOk;
}

struct CohomologyArgs {
  int base_dim = 1;
  std::string fiber_degrees;
  std::string center;
  std::string cls;
};

int cmd_cohomology(const CohomologyArgs& a) {
  try {
    BundleSpec spec{a.base_dim, parse_ints(a.fiber_degrees)};
    const IntVec c = parse_ints(a.cls);
    CohomologyOracle oracle;
    HVector h;
    if (a.center.empty()) {
      if (c.size() != 2) throw InvalidSpec("--class needs alpha,beta on X");
      h = oracle.dims(build_projective_bundle_fan(spec), PicClass::bundle(c[0], c[1]));
    } else {
      if (c.size() != 3) throw InvalidSpec("--class needs alpha,beta,k on the blow-up");
      const auto setup = make_blowup(spec, CenterSpec{split_csv(a.center)});
      h = oracle.dims(setup.blowup_fan, PicClass::blowup(c[0], c[1], c[2]));
    }
    std::cout << hvector_to_json(h).dump() << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "excol cohomology: " << e.what() << "\n";
    return kExitBadInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong full exceptional collections of line bundles on toric blow-ups"};
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Run the mutation script and write the collection");
  construct->add_option("--base-dim", ca.base_dim, "Dimension s of the base P^s")->required();
  construct->add_option("--fiber-degrees", ca.fiber_degrees, "a0,a1,...,ar with a0 = 0")->required();
  construct->add_option("--center", ca.center, "Two or three ray names, e.g. b1,f1")->required();
  construct->add_option("--out", ca.out, "Output file (default: stdout)");
  construct->add_flag("--no-cache", ca.no_cache, "Ignore the on-disk cohomology cache");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Certify a collection file");
  verify->add_option("--collection", va.collection, "Collection JSON")->required();
  verify->add_option("--out", va.out, "Report file (default: stdout)");
  verify->add_flag("--no-cache", va.no_cache, "Ignore the on-disk cohomology cache");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Construct and certify every case in a range");
  sweep->add_option("--max-dim", sa.max_dim, "Bound on s + r")->required();
  sweep->add_option("--max-degree", sa.max_degree, "Bound on the fiber degrees");
  sweep->add_option("--codim", sa.codim, "2, 3 or both");
  sweep->add_option("--jobs", sa.jobs, "Worker threads")->default_val(std::max(1u, std::thread::hardware_concurrency()));
  sweep->add_flag("--no-cache", sa.no_cache, "Ignore the on-disk cohomology cache");

  CohomologyArgs ha;
  auto* cohom = app.add_subcommand("cohomology", "Print h^i of a line bundle on X or on the blow-up");
  cohom->add_option("--base-dim", ha.base_dim)->required();
  cohom->add_option("--fiber-degrees", ha.fiber_degrees)->required();
  cohom->add_option("--center", ha.center, "Blow-up center; omit for X itself");
  cohom->add_option("--class", ha.cls, "alpha,beta on X or alpha,beta,k on the blow-up")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitBadInput;
  }

  if (*construct) return cmd_construct(ca);
  if (*verify) return cmd_verify(va);
  if (*sweep) return cmd_sweep(sa);
  return cmd_cohomology(ha);
}
