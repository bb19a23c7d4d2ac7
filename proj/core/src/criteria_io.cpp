#include "blowup/criteria_io.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace blowup::criteria {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

void write_report(std::ostream& out, const CriterionReport& r) {
  const auto prec = out.precision(17);
  out << '[' << tag_name(r.tag) << "]\n";
  out << "satisfied = " << (r.satisfied ? "true" : "false") << '\n';
  out << "lhs = " << r.lhs << '\n';
  out << "rhs = " << r.rhs << '\n';
  out << "margin = " << r.margin << '\n';
  out << "t_star = ";
  if (r.t_star) out << *r.t_star;
  else out << "none";
  out << '\n';
  for (const auto& in : r.inputs) out << "input." << in.name << " = " << in.value << '\n';
  if (!r.notes.empty()) out << "notes = " << r.notes << '\n';
  out << '\n';
  out.precision(prec);
}

void write_diagnostics(std::ostream& out, const DiagnosticsReport& d) {
  const auto prec = out.precision(17);
  out << "[diagnostics]\n";
  if (d.skipped) {
    out << "skipped = true\nnotes = " << d.note << "\n\n";
    out.precision(prec);
    return;
  }
  auto flag = [](bool b) { return b ? "true" : "false"; };
  out << "z = " << d.z << "\nz1 = " << d.z1 << "\nf_z = " << d.f_z << "\nf_zero = " << d.f_zero
      << "\nf_min = " << d.f_min << "\nf_min_at = " << d.f_min_at
      << "\nunreachable = " << flag(d.unreachable) << "\nek_over_ep = " << d.ek_over_ep
      << "\nkinetic_dominance = " << flag(d.kinetic_dominance) << "\nek_over_e = " << d.ek_over_e
      << "\nkinetic_share = " << flag(d.kinetic_share)
      << "\ndivergence_threshold = " << d.divergence_threshold
      << "\nlarge_divergence = " << flag(d.large_divergence) << '\n';
  if (!d.note.empty()) out << "notes = " << d.note << '\n';
  out << '\n';
  out.precision(prec);
}

void write_rotation_bounds(std::ostream& out, const RotationBounds& b) {
  const auto prec = out.precision(17);
  out << "[rotation-bounds]\nl = " << b.l << "\nscript_M = " << b.script_M
      << "\nTheta2_0 = " << b.Theta2_0 << "\nG_minus = " << b.G_minus << "\nG_plus = " << b.G_plus
      << "\ndelta = " << b.delta << "\nK = " << b.K_script << "\n\n";
  out.precision(prec);
}

std::string criteria_csv_header(const std::vector<std::string>& extra) {
  std::string h;
  for (const auto& e : extra) h += e + ',';
  return h + "tag,satisfied,lhs,rhs,margin,t_star,inputs,notes";
}

std::string criteria_csv_row(const CriterionReport& r, const std::vector<double>& extra) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (double e : extra) os << e << ',';
  os << tag_name(r.tag) << ',' << (r.satisfied ? 1 : 0) << ',' << r.lhs << ',' << r.rhs << ','
     << r.margin << ',';
  if (r.t_star) os << *r.t_star;
  std::ostringstream in;
  in << std::setprecision(17);
  for (std::size_t i = 0; i < r.inputs.size(); ++i) {
    in << (i ? ";" : "") << r.inputs[i].name << '=' << r.inputs[i].value;
  }
  os << ',' << quote(in.str()) << ',' << quote(r.notes);
  return os.str();
}

}  // namespace blowup::criteria
