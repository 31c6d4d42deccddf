#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrepi/netgen.hpp"
#include "mrepi/simulation.hpp"
#include "mrepi/theory.hpp"

namespace mrepi {

enum class StudyKind { asn, ddc };

StudyKind parse_study_kind(std::string_view text);

/// Sweep of a coupling target at equal route rates (lambda_a = lambda_b).
struct StudyConfig {
  StudyKind kind = StudyKind::asn;
  LayerSpec spec_a;
  LayerSpec spec_b;
  std::vector<double> targets;
  /// Common route rate at which the outbreak size is evaluated.
  double rate = 0.0;
  std::uint64_t seed = 0;
  /// 0 selects the coupling default.
  double tolerance = 0.0;
  ExcessWeighting weighting = ExcessWeighting::edge_class;
  /// Monte Carlo settings; nullopt for theory only.
  std::optional<SimConfig> sim;
};

struct StudyRow {
  double target = 0.0;
  double asn = 0.0;
  double ddc = 0.0;
  std::optional<double> threshold;
  double s_theory = 0.0;
  std::optional<double> s_sim;
  double stderr_s = 0.0;
  /// ok | unmet | infeasible
  std::string status = "ok";
};

/// One row per target. ASN targets share layer A and differ in how much of it
/// layer B copies; DDC targets relabel one fixed pair of layers. A row depends
/// on its target value, never on its position in the list.
std::vector<StudyRow> run_study(const StudyConfig& config);

void write_study_csv(std::ostream& out, StudyKind kind, const std::vector<StudyRow>& rows,
                     const std::vector<std::string>& comments = {});

}  // namespace mrepi
