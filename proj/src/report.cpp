#include "necklab/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace necklab {

std::string ledger_csv(const IndexLedger& led) {
  std::ostringstream out;
  out << "step,T,T_total,n_t,n_theta,converged,cached,iterations,energy,residual_sup,zero_tol,"
         "lambda,ind_uniform,null_uniform,ind_omega,null_omega,sylvester_ok,"
         "junction_l21_outer,junction_l21_inner,sup_dtheta_band,sup_ds_band,"
         "fit_residual,fit_residual_raw,fit_speed_s,pointwise_ratio_max,angular_ratio_max,"
         "rayleigh_min,verdict_upper,verdict_lower\n";
  for (const auto& s : led.steps) {
    out << s.step << ',' << format_g17(s.T) << ',' << format_g17(s.T_total) << ',' << s.n_t << ','
        << s.n_theta << ',' << (s.converged ? 1 : 0) << ',' << (s.cached ? 1 : 0) << ','
        << s.iterations << ',' << format_g17(s.energy) << ',' << format_g17(s.residual_sup) << ','
        << format_g17(s.zero_tol) << ',' << format_g17(s.lambda) << ',' << s.ind_uniform << ','
        << s.null_uniform << ',' << s.ind_omega << ',' << s.null_omega << ','
        << (s.sylvester_ok ? 1 : 0) << ',' << format_g17(s.junction_l21_outer) << ','
        << format_g17(s.junction_l21_inner) << ',' << format_g17(s.sup_dtheta_band) << ','
        << format_g17(s.sup_ds_band) << ',' << format_g17(s.fit_residual) << ','
        << format_g17(s.fit_residual_raw) << ',' << format_g17(s.fit_speed_s) << ','
        << format_g17(s.pointwise_ratio_max) << ',' << format_g17(s.angular_ratio_max) << ','
        << (std::isfinite(s.rayleigh_min) ? format_g17(s.rayleigh_min) : std::string("")) << ','
        << (s.verdict_upper ? 1 : 0) << ',' << (s.verdict_lower ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string svg_line_plot(const std::string& title, const std::vector<double>& xs,
                          const std::vector<std::vector<double>>& series,
                          const std::vector<std::string>& labels) {
  const int W = 640, H = 420, ML = 70, MR = 20, MT = 40, MB = 50;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title
      << "</text>\n";

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool have = false;
  for (double x : xs) {
    if (!have) { xmin = xmax = x; }
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    have = true;
  }
  bool have_y = false;
  for (const auto& s : series)
    for (double y : s) {
      if (!std::isfinite(y)) continue;
      if (!have_y) { ymin = ymax = y; have_y = true; }
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!have) { xmin = 0; xmax = 1; }
  if (!have_y) { ymin = 0; ymax = 1; }
  if (xmax - xmin < 1e-300) xmax = xmin + 1;
  if (ymax - ymin < 1e-300) ymax = ymin + 1;

  auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
  auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

  out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
      << H - MB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << ML << "\" y=\"" << H - MB + 18 << "\" font-size=\"11\">"
      << format_g17(xmin) << "</text>\n";
  out << "<text x=\"" << W - MR << "\" y=\"" << H - MB + 18
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_g17(xmax) << "</text>\n";
  out << "<text x=\"" << ML - 6 << "\" y=\"" << H - MB << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_g17(ymin) << "</text>\n";
  out << "<text x=\"" << ML - 6 << "\" y=\"" << MT + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
      << format_g17(ymax) << "</text>\n";

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 8];
    std::ostringstream pts;
    for (size_t i = 0; i < xs.size() && i < series[s].size(); ++i) {
      if (!std::isfinite(series[s][i])) continue;
      pts << px(xs[i]) << ',' << py(series[s][i]) << ' ';
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
        << pts.str() << "\"/>\n";
    if (s < labels.size())
      out << "<text x=\"" << W - MR - 4 << "\" y=\"" << MT + 14 * (s + 1)
          << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << labels[s]
          << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_report: cannot write '" + path + "'");
  out << content;
}

}  // namespace

std::vector<std::string> emit_report(const IndexLedger& led, const std::string& out_dir,
                                     const EmitFormats& formats) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  std::vector<std::string> written;

  if (formats.csv) {
    const std::string path = (dir / (led.scenario.name + "_steps.csv")).string();
    write_file(path, ledger_csv(led));
    written.push_back(path);
  }
  if (formats.json) {
    const std::string path = (dir / (led.scenario.name + "_ledger.json")).string();
    write_file(path, ledger_to_json(led) + "\n");
    written.push_back(path);
  }
  if (formats.svg) {
    std::vector<double> xs;
    for (const auto& s : led.steps) xs.push_back(s.T);

    size_t n_eig = 0;
    for (const auto& s : led.steps) n_eig = std::max(n_eig, s.low_eigenvalues.size());
    std::vector<std::vector<double>> eigs(n_eig, std::vector<double>());
    std::vector<std::string> eig_labels;
    for (size_t k = 0; k < n_eig; ++k) {
      for (const auto& s : led.steps)
        eigs[k].push_back(k < s.low_eigenvalues.size()
                              ? s.low_eigenvalues[k]
                              : std::numeric_limits<double>::quiet_NaN());
      eig_labels.push_back("lambda_" + std::to_string(k + 1));
    }
    std::vector<double> lam, fit;
    for (const auto& s : led.steps) {
      lam.push_back(s.lambda);
      fit.push_back(s.fit_residual);
    }

    const std::string p1 = (dir / (led.scenario.name + "_eigs.svg")).string();
    write_file(p1, svg_line_plot("lowest eigenvalues vs T", xs, eigs, eig_labels));
    const std::string p2 = (dir / (led.scenario.name + "_lambda.svg")).string();
    write_file(p2, svg_line_plot("average image length vs T", xs, {lam}, {"lambda"}));
    const std::string p3 = (dir / (led.scenario.name + "_fit.svg")).string();
    write_file(p3, svg_line_plot("geodesic fit C1 residual vs T", xs, {fit}, {"residual"}));
    written.push_back(p1);
    written.push_back(p2);
    written.push_back(p3);
  }
  return written;
}

}  // namespace necklab
