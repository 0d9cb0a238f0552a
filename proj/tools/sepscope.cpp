// Command-line front end: loads states or ensembles, runs the criteria
// battery, builds and verifies decompositions, and drives the rank-one
// search.  All results go to stdout as JSON; diagnostics go to stderr.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sepscope/criteria.hpp"
#include "sepscope/decompose.hpp"
#include "sepscope/duality.hpp"
#include "sepscope/errors.hpp"
#include "sepscope/factorize.hpp"
#include "sepscope/json_io.hpp"
#include "sepscope/states.hpp"

namespace {

using sepscope::DensityMatrix;
using sepscope::DomainError;
using sepscope::Ensemble;
using sepscope::Json;

// How the state was requested on the command line.
struct StateSelection {
  std::string input_path;
  std::string name;
  double p = 0.5;
  bool p_given = false;
  std::size_t iso_dim = 2;
  double fidelity = 0.0;
  bool fidelity_given = false;
};

// The resolved state plus everything needed to describe and analyze it.
struct ResolvedState {
  DensityMatrix state;
  Json descriptor;
  bool has_ensemble = false;
  Ensemble ensemble;
  bool is_isotropic = false;
  std::string name;
  double p = 0.0;
  std::size_t iso_dim = 0;
  double fidelity = 0.0;
};

void add_state_options(CLI::App* cmd, StateSelection& sel) {
  auto* input = cmd->add_option("--input", sel.input_path,
                                "state or ensemble JSON file");
  auto* state = cmd->add_option(
      "--state", sel.name, "named state (see list-states) or 'isotropic'");
  cmd->add_option("--p", sel.p, "mixing weight for parametrized named states")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--d", sel.iso_dim, "local dimension for --state isotropic")
      ->check(CLI::PositiveNumber);
  auto* fid = cmd->add_option("--F", sel.fidelity,
                              "fidelity for --state isotropic");
  input->excludes(state);
  state->excludes(input);
  cmd->callback([&sel, cmd, fid] {
    sel.p_given = cmd->count("--p") > 0;
    sel.fidelity_given = fid->count() > 0;
  });
}

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("cannot open input file: " + path);
  }
  return Json::parse(in);
}

ResolvedState resolve_state(const StateSelection& sel) {
  ResolvedState out;
  if (!sel.input_path.empty()) {
    const Json doc = parse_json_file(sel.input_path);
    if (!doc.is_object()) {
      throw DomainError("input document must be a JSON object");
    }
    out.descriptor["source"] = "file";
    out.descriptor["path"] = sel.input_path;
    if (doc.contains("terms")) {
      out.ensemble = sepscope::ensemble_from_json(doc);
      out.has_ensemble = true;
      out.state = sepscope::to_density(out.ensemble);
      out.descriptor["kind"] = "ensemble";
    } else {
      out.state = sepscope::state_from_json(doc);
      out.descriptor["kind"] = "state";
    }
  } else if (sel.name == "isotropic") {
    if (!sel.fidelity_given) {
      throw DomainError("--state isotropic requires --F");
    }
    const auto iso =
        sepscope::isotropic_from_fidelity(sel.iso_dim, sel.fidelity);
    out.state = iso.state;
    out.ensemble = iso.ensemble;
    out.has_ensemble = true;
    out.is_isotropic = true;
    out.name = "isotropic";
    out.iso_dim = sel.iso_dim;
    out.fidelity = sel.fidelity;
    out.descriptor["source"] = "isotropic";
    out.descriptor["d"] = sel.iso_dim;
    out.descriptor["F"] = sel.fidelity;
  } else if (!sel.name.empty()) {
    const auto named = sepscope::named_state(sel.name, sel.p);
    out.state = named.state;
    out.ensemble = named.ensemble;
    out.has_ensemble = true;
    out.name = named.name;
    out.p = sel.p;
    out.descriptor["source"] = "named";
    out.descriptor["name"] = named.name;
    bool takes_p = false;
    for (const auto& info : sepscope::list_named_states()) {
      if (info.name == named.name) {
        takes_p = info.takes_p;
      }
    }
    if (takes_p) {
      out.descriptor["p"] = sel.p;
    } else if (sel.p_given) {
      throw DomainError("state '" + named.name + "' takes no --p parameter");
    }
  } else {
    throw DomainError("provide --input FILE or --state NAME");
  }
  out.descriptor["dim_a"] = out.state.dim_a;
  out.descriptor["dim_b"] = out.state.dim_b;
  return out;
}

// Ensemble used to build the channel: the explicit one when the input came
// with terms, otherwise the spectral ensemble of the state.
Ensemble working_ensemble(const ResolvedState& rs) {
  if (rs.has_ensemble) {
    return rs.ensemble;
  }
  return sepscope::spectral_ensemble(rs.state);
}

void emit(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

void report_elapsed(const char* label,
                    std::chrono::steady_clock::time_point start) {
  const auto elapsed = std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - start);
  std::cerr << label << ": " << elapsed.count() << " ms\n";
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  StateSelection sel;
  std::vector<std::string> criteria;
  bool certificate = false;
};

bool verdict_selected(const std::vector<std::string>& wanted,
                      const std::string& criterion) {
  if (wanted.empty()) {
    return true;
  }
  for (const auto& name : wanted) {
    if (name == criterion) {
      return true;
    }
  }
  return false;
}

void check_criteria_names(const std::vector<std::string>& wanted,
                          const std::vector<sepscope::Verdict>& all) {
  for (const auto& name : wanted) {
    bool known = false;
    for (const auto& v : all) {
      if (v.criterion == name) {
        known = true;
      }
    }
    if (!known) {
      std::string valid;
      for (const auto& v : all) {
        valid += (valid.empty() ? "" : ", ") + v.criterion;
      }
      throw DomainError("unknown criterion '" + name + "' (expected one of: " +
                        valid + ")");
    }
  }
}

int cmd_analyze(const AnalyzeOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedState rs = resolve_state(opt.sel);
  if (opt.certificate && rs.name != "upb-tiles") {
    throw DomainError("--certificate is only available for --state upb-tiles");
  }

  std::vector<sepscope::Verdict> verdicts =
      sepscope::necessary_criteria(rs.state);
  check_criteria_names(opt.criteria, verdicts);
  std::vector<sepscope::Verdict> selected;
  for (const auto& v : verdicts) {
    if (verdict_selected(opt.criteria, v.criterion)) {
      selected.push_back(v);
    }
  }
  if (rs.is_isotropic) {
    selected.push_back(
        sepscope::isotropic_analytic_verdict(rs.iso_dim, rs.fidelity));
  }

  bool any_fired = false;
  for (const auto& v : selected) {
    if (v.result == sepscope::VerdictResult::Entangled) {
      any_fired = true;
    }
  }

  // Separable classification needs an actually verified decomposition; the
  // closed forms cover the isotropic window at d=2 and the balanced mixture.
  std::string classification = any_fired ? "Entangled" : "Unknown";
  Json decomposition_note;
  if (!any_fired) {
    sepscope::SeparableDecomposition dec;
    bool have_closed_form = false;
    if (rs.is_isotropic && rs.iso_dim == 2 && rs.fidelity >= 0.25 - 1e-12 &&
        rs.fidelity <= 0.5 + 1e-12) {
      dec = sepscope::isotropic_decomposition(rs.fidelity);
      have_closed_form = true;
    } else if (rs.name == "bell-mixture" && std::abs(rs.p - 0.5) <= 1e-12) {
      dec = sepscope::bell_mixture_decomposition();
      have_closed_form = true;
    }
    if (have_closed_form) {
      const auto report = sepscope::verify_decomposition(rs.state, dec, 1e-8);
      if (report.pass) {
        classification = "Separable";
        decomposition_note["terms"] = dec.terms.size();
        decomposition_note["reconstruction_error"] =
            report.reconstruction_error;
      }
    }
  }

  Json report;
  report["state"] = rs.descriptor;

  Json verdict_list = Json::array();
  for (const auto& v : selected) {
    verdict_list.push_back(sepscope::verdict_to_json(v));
  }
  report["verdicts"] = verdict_list;

  const auto kraus = sepscope::kraus_from_ensemble(working_ensemble(rs));
  const auto flags = sepscope::channel_properties(kraus);
  Json channel;
  channel["kraus_terms"] = kraus.ops.size();
  channel["trace_preserving"] = flags.trace_preserving;
  channel["unital"] = flags.unital;
  report["channel"] = channel;

  const auto ranks = sepscope::rank_theorem_data(rs.state);
  Json rank_json;
  rank_json["rank_ab"] = ranks.rank_ab;
  rank_json["rank_a"] = ranks.rank_a;
  rank_json["rank_b"] = ranks.rank_b;
  rank_json["inequality_holds"] = ranks.inequality_holds;
  report["ranks"] = rank_json;

  if (opt.certificate) {
    const auto cert = sepscope::upb_entanglement_certificate();
    report["certificate"] = sepscope::certificate_to_json(cert);
    if (cert.passed) {
      classification = "Entangled";
    }
  }
  if (!decomposition_note.is_null()) {
    report["verified_decomposition"] = decomposition_note;
  }
  report["classification"] = classification;

  emit(report);
  report_elapsed("analyze", start);
  return 0;
}

// ---------------------------------------------------------------------------
// kraus

int cmd_kraus(const StateSelection& sel) {
  const ResolvedState rs = resolve_state(sel);
  emit(sepscope::kraus_to_json(
      sepscope::kraus_from_ensemble(working_ensemble(rs))));
  return 0;
}

// ---------------------------------------------------------------------------
// decompose

struct DecomposeOptions {
  std::string family;
  double fidelity = 0.0;
  bool fidelity_given = false;
};

int cmd_decompose(const DecomposeOptions& opt) {
  sepscope::SeparableDecomposition dec;
  if (opt.family == "isotropic") {
    if (!opt.fidelity_given) {
      throw DomainError("--family isotropic requires --F");
    }
    dec = sepscope::isotropic_decomposition(opt.fidelity);
  } else if (opt.family == "bell-mixture") {
    dec = sepscope::bell_mixture_decomposition();
  } else {
    throw DomainError("unknown family '" + opt.family +
                      "' (expected 'isotropic' or 'bell-mixture')");
  }
  emit(sepscope::decomposition_to_json(dec));
  return 0;
}

// ---------------------------------------------------------------------------
// search

struct SearchCliOptions {
  StateSelection sel;
  sepscope::SearchOptions search;
  std::string emit_path;
};

int cmd_search(const SearchCliOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedState rs = resolve_state(opt.sel);
  const auto result = sepscope::rank_one_search(rs.state, opt.search);
  emit(sepscope::search_report_to_json(result));
  report_elapsed("search", start);
  if (!opt.emit_path.empty()) {
    if (result.found) {
      std::ofstream out(opt.emit_path);
      if (!out) {
        throw DomainError("cannot write decomposition file: " + opt.emit_path);
      }
      out << sepscope::decomposition_to_json(result.decomposition).dump(2)
          << "\n";
    } else {
      std::cerr << "search: no decomposition found; nothing written to "
                << opt.emit_path << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  StateSelection sel;
  std::string decomposition_path;
  double tol = 1e-8;
};

int cmd_verify(const VerifyOptions& opt) {
  const ResolvedState rs = resolve_state(opt.sel);
  const Json doc = parse_json_file(opt.decomposition_path);
  const auto dec = sepscope::decomposition_from_json(doc);
  const auto report = sepscope::verify_decomposition(rs.state, dec, opt.tol);
  emit(sepscope::verification_to_json(report));
  return report.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// list-states

int cmd_list_states() {
  Json list = Json::array();
  for (const auto& info : sepscope::list_named_states()) {
    Json entry;
    entry["name"] = info.name;
    entry["takes_p"] = info.takes_p;
    entry["description"] = info.description;
    list.push_back(entry);
  }
  Json iso;
  iso["name"] = "isotropic";
  iso["takes_p"] = false;
  iso["description"] =
      "maximally entangled projector mixed with white noise; "
      "parametrized by --d and --F";
  list.push_back(iso);
  emit(list);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bipartite separability analysis toolkit"};
  app.require_subcommand(1);

  AnalyzeOptions analyze_opt;
  auto* analyze = app.add_subcommand(
      "analyze", "run the criteria battery and classify a state");
  add_state_options(analyze, analyze_opt.sel);
  analyze->add_option("--criteria", analyze_opt.criteria,
                      "restrict to these criteria (repeat or comma-separate)")
      ->delimiter(',');
  analyze->add_flag("--certificate", analyze_opt.certificate,
                    "attach the exact entanglement certificate (upb-tiles)");

  StateSelection kraus_sel;
  auto* kraus = app.add_subcommand(
      "kraus", "emit the Kraus set of the channel dual to a state");
  add_state_options(kraus, kraus_sel);

  DecomposeOptions decompose_opt;
  auto* decompose = app.add_subcommand(
      "decompose", "emit a closed-form separable decomposition");
  decompose
      ->add_option("--family", decompose_opt.family,
                   "'isotropic' or 'bell-mixture'")
      ->required();
  auto* dec_fid =
      decompose->add_option("--F", decompose_opt.fidelity,
                            "fidelity for --family isotropic");
  decompose->callback(
      [&decompose_opt, dec_fid] { decompose_opt.fidelity_given =
                                      dec_fid->count() > 0; });

  SearchCliOptions search_opt;
  auto* search = app.add_subcommand(
      "search", "look for a rank-one mixing of the state's ensemble");
  add_state_options(search, search_opt.sel);
  search->add_option("--terms", search_opt.search.target_terms,
                     "number of mixed terms (default: dim_a * dim_b)");
  search->add_option("--restarts", search_opt.search.restarts,
                     "independent random restarts");
  search->add_option("--seed", search_opt.search.seed, "base RNG seed");
  search->add_option("--tol", search_opt.search.tol,
                     "residual below which the search reports found");
  search->add_option("--max-iterations", search_opt.search.max_iterations,
                     "iteration cap per restart");
  search->add_option("--threads", search_opt.search.threads,
                     "worker threads (default: SEPSCOPE_THREADS or cores)");
  search->add_option("--emit-decomposition", search_opt.emit_path,
                     "write the verified decomposition JSON here when found");

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand(
      "verify", "check a separable decomposition against a state");
  add_state_options(verify, verify_opt.sel);
  verify
      ->add_option("--decomposition", verify_opt.decomposition_path,
                   "decomposition JSON file")
      ->required();
  verify->add_option("--tol", verify_opt.tol,
                     "reconstruction tolerance (default 1e-8)");

  auto* list =
      app.add_subcommand("list-states", "list the built-in state families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) {
      return cmd_analyze(analyze_opt);
    }
    if (kraus->parsed()) {
      return cmd_kraus(kraus_sel);
    }
    if (decompose->parsed()) {
      return cmd_decompose(decompose_opt);
    }
    if (search->parsed()) {
      return cmd_search(search_opt);
    }
    if (verify->parsed()) {
      return cmd_verify(verify_opt);
    }
    if (list->parsed()) {
      return cmd_list_states();
    }
  } catch (const sepscope::CertificateFailure& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return 1;
  } catch (const sepscope::InternalInconsistency& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return 1;
  } catch (const Json::parse_error& e) {
    std::cerr << "error: invalid JSON input: " << e.what() << "\n";
    return 2;
  } catch (const sepscope::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
