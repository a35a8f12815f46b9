#include "hyperem/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hyperem/error.hpp"

namespace hyperem {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void newline(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

}  // namespace

Json& Json::set(std::string key, Json value) {
  std::get<Object>(v_).emplace_back(std::move(key), std::move(value));
  return *this;
}

Json& Json::push(Json value) {
  std::get<Array>(v_).push_back(std::move(value));
  return *this;
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  if (indent > 0) out += '\n';
  return out;
}

void Json::write(std::string& out, int indent, int depth) const {
  if (std::holds_alternative<std::nullptr_t>(v_)) {
    out += "null";
  } else if (const bool* b = std::get_if<bool>(&v_)) {
    out += *b ? "true" : "false";
  } else if (const long long* i = std::get_if<long long>(&v_)) {
    out += std::to_string(*i);
  } else if (const double* d = std::get_if<double>(&v_)) {
    out += format_double(*d);
  } else if (const std::string* s = std::get_if<std::string>(&v_)) {
    escape_into(out, *s);
  } else if (const Array* a = std::get_if<Array>(&v_)) {
    if (a->empty()) {
      out += "[]";
      return;
    }
    out += '[';
    for (std::size_t k = 0; k < a->size(); ++k) {
      if (k) out += ',';
      newline(out, indent, depth + 1);
      (*a)[k].write(out, indent, depth + 1);
    }
    newline(out, indent, depth);
    out += ']';
  } else {
    const Object& o = std::get<Object>(v_);
    if (o.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    for (std::size_t k = 0; k < o.size(); ++k) {
      if (k) out += ',';
      newline(out, indent, depth + 1);
      escape_into(out, o[k].first);
      out += indent > 0 ? ": " : ":";
      o[k].second.write(out, indent, depth + 1);
    }
    newline(out, indent, depth);
    out += '}';
  }
}

Json to_json(const Params& p) {
  return Json::object().set("n", p.n).set("p", p.p).set("c", p.c).set("alpha", p.alpha);
}

Json to_json(const Regime& r) {
  return Json::object().set("tag", to_string(r.tag)).set("critical_boundary", r.critical_boundary);
}

Json to_json(const Event& e) {
  return Json::object()
      .set("kind", to_string(e.kind))
      .set("r", e.r)
      .set("value", e.value)
      .set("index", e.index);
}

Json to_json(const DecayEstimate& d) {
  return Json::object()
      .set("law", to_string(d.law))
      .set("hypothesis", to_string(d.hypothesis))
      .set("fitted_rate", d.fitted_rate)
      .set("fitted_constant", d.fitted_constant)
      .set("window", Json::array().push(d.r_lo).push(d.r_hi))
      .set("residual", d.residual)
      .set("points", d.points);
}

Json to_json(const Report& r) {
  Json zeros = Json::array();
  for (const Event& e : r.zeros) zeros.push(to_json(e));
  return Json::object()
      .set("params", to_json(r.params))
      .set("regime", to_json(r.regime))
      .set("sign_class", to_string(r.sign_class))
      .set("zero_count", r.zero_count)
      .set("zero_count_final", r.zero_count_final)
      .set("decay", to_json(r.decay))
      .set("separatrix_side", to_string(r.separatrix_side))
      .set("zeros", std::move(zeros))
      .set("r_max_used", r.r_max_used)
      .set("r_end", r.r_end)
      .set("tol_used", r.tol_used)
      .set("termination", to_string(r.termination));
}

Json to_json(const DiagnosticsReport& d) {
  return Json::object()
      .set("F_monotone", d.F_monotone)
      .set("Psi_sign", to_string(d.Psi_sign))
      .set("Psi_identity_max_err", d.Psi_identity_max_err)
      .set("decay", to_json(d.decay));
}

Json to_json(const SeparatrixResult& s) {
  return Json::object()
      .set("alpha_star", s.alpha_star)
      .set("lo", s.lo)
      .set("hi", s.hi)
      .set("probes", s.probes)
      .set("converged", s.converged);
}

Json to_json(const ThresholdResult& t) {
  Json probes = Json::array();
  for (const ZeroCountProbe& p : t.monotonicity_probes) {
    probes.push(
        Json::object().set("alpha", p.alpha).set("zeros", p.zeros).set("final", p.final));
  }
  return Json::object()
      .set("k", t.k)
      .set("alpha_k", t.alpha_k)
      .set("lo", t.lo)
      .set("hi", t.hi)
      .set("ambiguous", t.ambiguous)
      .set("monotonicity_probes", std::move(probes))
      .set("note", t.note);
}

Json events_json(const Trajectory& traj) {
  Json a = Json::array();
  for (const Event& e : traj.events()) a.push(to_json(e));
  return a;
}

Json exact_verification_json(const ClosedForm& form, double max_residual) {
  return Json::object()
      .set("family", to_string(form.family()))
      .set("n", form.n())
      .set("p", form.p())
      .set("constant_used", form.constant())
      .set("printed_constant", form.printed_constant())
      .set("printed_constant_matches", form.printed_constant_matches())
      .set("max_residual", max_residual);
}

void CsvTable::add(std::vector<Cell> row) {
  if (row.size() != header_.size()) throw Error(ErrorKind::Validation, "CSV row width mismatch");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t k = 0; k < header_.size(); ++k) {
    if (k) out += ',';
    out += header_[k];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      if (const double* d = std::get_if<double>(&row[k])) {
        out += std::isfinite(*d) ? format_double(*d) : std::string();
      } else if (const long long* i = std::get_if<long long>(&row[k])) {
        out += std::to_string(*i);
      } else {
        out += std::get<std::string>(row[k]);
      }
    }
    out += '\n';
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  CsvTable t({"r", "u", "v"});
  for (const State& s : traj.samples()) t.add({s.r, s.u, s.v});
  return t.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace hyperem
