#pragma once

// Deterministic report emission: per-step CSV, full-ledger JSON, and SVG
// line plots.

#include <string>
#include <vector>

#include "necklab/ledger.hpp"

namespace necklab {

struct EmitFormats {
  bool csv = true;
  bool json = true;
  bool svg = true;
};

// Writes {name}_steps.csv, {name}_ledger.json, {name}_{eigs,lambda,fit}.svg
// under out_dir; returns the written paths.  Byte-identical for a fixed
// ledger.
std::vector<std::string> emit_report(const IndexLedger& ledger, const std::string& out_dir,
                                     const EmitFormats& formats = {});

std::string ledger_csv(const IndexLedger& ledger);

// Simple polyline plot; one curve per series, shared x axis.
std::string svg_line_plot(const std::string& title, const std::vector<double>& xs,
                          const std::vector<std::vector<double>>& series,
                          const std::vector<std::string>& labels);

}  // namespace necklab
