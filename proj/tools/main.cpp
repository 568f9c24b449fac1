#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "levilab/model.hpp"
#include "levilab/report.hpp"

using namespace levilab;

namespace {

constexpr const char* kHorizonEnv = "LEVILAB_HORIZON";

Index default_horizon() {
  if (const char* env = std::getenv(kHorizonEnv)) {
    try {
      const long long v = std::stoll(env);
      if (v > 0) return v;
    } catch (...) {
    }
    std::cerr << "warning: ignoring malformed " << kHorizonEnv << "\n";
  }
  return kDefaultHorizon;
}

ModelTable load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

VerdictState parse_expect(const std::string& s) {
  if (s == "verified") return VerdictState::Verified;
  if (s == "refuted") return VerdictState::Refuted;
  if (s == "inconclusive") return VerdictState::Inconclusive;
  throw std::runtime_error("bad --expect value '" + s + "'");
}

ReportFormat parse_format(const std::string& s) {
  if (s == "text") return ReportFormat::Text;
  if (s == "structured") return ReportFormat::Structured;
  throw std::runtime_error("bad --format value '" + s + "'");
}

TestCatalog catalog_for(const ModelTable& table, const std::string& name, Space domain,
                        Index horizon) {
  if (!name.empty()) return table.catalog(name);
  return catalog_default(domain, horizon);
}

int property_exit(const PropertyVerdicts& v) {
  for (const auto& x : {v.sigma_levi, v.quasi_c, v.quasi})
    if (x.inconclusive()) return kExitInconclusive;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levilab: exact certificates for order convergence and sigma-Levi classes"};
  app.require_subcommand(1);

  Index horizon = default_horizon();
  std::string format_name = "text";
  app.add_option("--horizon", horizon, "exhaustive-check horizon (index steps)");
  app.add_option("--format", format_name, "output format: text|structured");

  std::string model_path, seq_name, limit_name, witness_name, op_name, set_name, family_name;
  std::string catalog_name, expect_name = "verified", report_path;

  auto* conv = app.add_subcommand("check-convergence", "order convergence |S(n)-x| <= W(n)");
  conv->add_option("model", model_path)->required();
  conv->add_option("sequence", seq_name)->required();
  conv->add_option("limit", limit_name)->required();
  conv->add_option("witness", witness_name)->required();
  conv->add_option("--expect", expect_name);

  auto* cauchy = app.add_subcommand("check-cauchy", "order Cauchy |S(n')-S(n'')| <= W(n)");
  cauchy->add_option("model", model_path)->required();
  cauchy->add_option("sequence", seq_name)->required();
  cauchy->add_option("witness", witness_name)->required();
  cauchy->add_option("--expect", expect_name);

  auto* coll = app.add_subcommand("check-collective", "one witness for a family of sequences");
  coll->add_option("model", model_path)->required();
  coll->add_option("family", family_name)->required();
  coll->add_option("witness", witness_name)->required();
  coll->add_option("--expect", expect_name);

  auto* classify = app.add_subcommand("classify", "sigma-Levi / quasi-c / quasi verdicts");
  classify->add_option("model", model_path)->required();
  classify->add_option("operator", op_name)->required();
  classify->add_option("--catalog", catalog_name);

  auto* classify_set = app.add_subcommand("classify-set", "collective verdicts for a set");
  classify_set->add_option("model", model_path)->required();
  classify_set->add_option("set", set_name)->required();
  classify_set->add_option("--catalog", catalog_name);

  std::string set_b_name, combine_mode = "affine";
  std::vector<std::string> weight_args;
  auto* combine = app.add_subcommand("combine", "affine-pair or l1-series combinators");
  combine->add_option("model", model_path)->required();
  combine->add_option("setA", set_name)->required();
  combine->add_option("setB", set_b_name, "second set (affine mode)");
  combine->add_option("--mode", combine_mode, "affine|l1");
  combine->add_option("--weights", weight_args, "l1 weights (rationals)");
  combine->add_option("--catalog", catalog_name);

  std::vector<std::string> pairing_args;
  auto* dominate = app.add_subcommand("dominate", "transfer a quasi witness through domination");
  dominate->add_option("model", model_path)->required();
  dominate->add_option("setA", set_name)->required();
  dominate->add_option("setC", set_b_name)->required();
  dominate->add_option("--pairing", pairing_args, "member indexes of C majorizing A, in order");
  dominate->add_option("--catalog", catalog_name);

  auto* scenarios = app.add_subcommand("paper-scenarios", "run the pinned scenario bundles");
  scenarios->add_option("--report", report_path, "also write the report to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    const ReportFormat fmt = parse_format(format_name);

    if (*scenarios) {
      const ScenarioReport report = run_paper_scenarios(horizon);
      write_scenarios(std::cout, fmt, report);
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("cannot write report to '" + report_path + "'");
        write_scenarios(out, fmt, report);
      }
      return report.all_pass ? kExitOk : kExitRefuted;
    }

    const ModelTable table = load_model(model_path);
    const VerdictState expected = parse_expect(expect_name);

    if (*conv) {
      const Verdict v = check_order_convergence(table.sequence(seq_name),
                                                table.element(limit_name),
                                                table.sequence(witness_name), horizon);
      write_verdict(std::cout, fmt, "check-convergence", v);
      return verdict_exit_code(v, expected);
    }
    if (*cauchy) {
      const Verdict v =
          check_order_cauchy(table.sequence(seq_name), table.sequence(witness_name), horizon);
      write_verdict(std::cout, fmt, "check-cauchy", v);
      return verdict_exit_code(v, expected);
    }
    if (*coll) {
      const Verdict v =
          check_collective(table.family(family_name), table.sequence(witness_name), horizon);
      write_verdict(std::cout, fmt, "check-collective", v);
      return verdict_exit_code(v, expected);
    }
    if (*classify) {
      const OpPtr op = table.op(op_name);
      const auto v =
          classify_levi(*op, catalog_for(table, catalog_name, op->domain, horizon), horizon);
      write_property_verdicts(std::cout, fmt, op_name, v);
      return property_exit(v);
    }
    if (*classify_set) {
      const OperatorSet& set = table.opset(set_name);
      const auto v = classify_collective(
          set, catalog_for(table, catalog_name, set.domain, horizon), horizon);
      write_property_verdicts(std::cout, fmt, set_name, v);
      return property_exit(v);
    }
    if (*combine) {
      const OperatorSet& a = table.opset(set_name);
      if (combine_mode == "affine") {
        if (set_b_name.empty()) throw std::runtime_error("affine mode needs two sets");
        const std::vector<std::pair<Rat, Rat>> exhibits = {
            {Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1, 2), Rat(1, 2)}, {Rat(1, 3), Rat(-2, 3)}};
        const auto out = collective_combine_affine(
            a, table.opset(set_b_name), exhibits,
            catalog_for(table, catalog_name, a.domain, horizon), horizon);
        write_combine(std::cout, fmt, out);
        return out.all_verified ? kExitOk : kExitRefuted;
      }
      if (combine_mode == "l1") {
        std::vector<Rat> weights;
        for (const auto& w : weight_args) {
          const auto q = rat_parse(w);
          if (!q) throw std::runtime_error("bad weight '" + w + "'");
          weights.push_back(*q);
        }
        if (weights.size() != a.members.size())
          throw std::runtime_error("need one weight per member of setA");
        const auto out = collective_combine_l1(
            weights, a.members, catalog_for(table, catalog_name, a.domain, horizon), horizon);
        write_combine(std::cout, fmt, out);
        return out.all_verified ? kExitOk : kExitRefuted;
      }
      throw std::runtime_error("bad --mode value '" + combine_mode + "'");
    }
    if (*dominate) {
      const OperatorSet& a = table.opset(set_name);
      const OperatorSet& c = table.opset(set_b_name);
      std::vector<size_t> pairing;
      for (const auto& p : pairing_args) pairing.push_back(std::stoul(p));
      if (pairing.empty())
        for (size_t i = 0; i < a.members.size(); ++i)
          pairing.push_back(i % std::max<size_t>(1, c.members.size()));
      const TestCatalog cat = catalog_for(table, catalog_name, a.domain, horizon);
      // Collective quasi witnesses for C, derived per catalog entry.
      std::vector<WitnessSequence> wc;
      for (const auto& entry : cat.entries) {
        std::optional<WitnessSequence> shared;
        for (const auto& t : c.members) {
          const auto img = ElementSequence::image(t, entry.seq);
          const auto lim = pointwise_limit(img);
          if (!lim.limit) throw std::runtime_error("cannot derive a witness for " + t->name);
          WitnessSequence w =
              std::holds_alternative<OpFiniteRank>(t->kind)
                  ? finite_rank_levi_limit(*t, entry.seq, entry.bound).witness
                  : canonical_deficiency_witness(img, *lim.limit);
          shared = shared ? ElementSequence::sup_of(std::move(*shared), std::move(w))
                          : std::move(w);
        }
        wc.push_back(ElementSequence::scaled(Rat(2), std::move(*shared)));
      }
      const auto out = domination_transfer(a, c, pairing, wc, cat, horizon);
      write_domination(std::cout, fmt, out);
      return out.all_verified ? kExitOk : kExitRefuted;
    }
    return kExitInputError;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
