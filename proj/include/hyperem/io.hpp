#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hyperem/classify.hpp"
#include "hyperem/diagnostics.hpp"
#include "hyperem/exact.hpp"
#include "hyperem/ode.hpp"

namespace hyperem {

/// %.17g, or "null" when x is not finite.
std::string format_double(double x);

/// Minimal JSON value with insertion-ordered objects.
class Json {
 public:
  using Array = std::vector<Json>;
  using Object = std::vector<std::pair<std::string, Json>>;

  Json() : v_(nullptr) {}
  Json(std::nullptr_t) : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(int i) : v_(static_cast<long long>(i)) {}
  Json(long long i) : v_(i) {}
  Json(std::size_t i) : v_(static_cast<long long>(i)) {}
  Json(double d) : v_(d) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Array a) : v_(std::move(a)) {}

  static Json object() { Json j; j.v_ = Object{}; return j; }
  static Json array() { Json j; j.v_ = Array{}; return j; }

  /// Appends a member (objects) and returns *this.
  Json& set(std::string key, Json value);
  /// Appends an element (arrays) and returns *this.
  Json& push(Json value);

  std::string dump(int indent = 2) const;

 private:
  void write(std::string& out, int indent, int depth) const;
  std::variant<std::nullptr_t, bool, long long, double, std::string, Array, Object> v_;
};

Json to_json(const Params& p);
Json to_json(const Regime& r);
Json to_json(const Event& e);
Json to_json(const DecayEstimate& d);
Json to_json(const Report& r);
Json to_json(const DiagnosticsReport& d);
Json to_json(const SeparatrixResult& s);
Json to_json(const ThresholdResult& t);
Json events_json(const Trajectory& traj);
/// {family, n, p, constant_used, printed_constant, printed_constant_matches, max_residual}
Json exact_verification_json(const ClosedForm& form, double max_residual);

/// Comma-separated table with '\n' line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  using Cell = std::variant<double, long long, std::string>;
  void add(std::vector<Cell> row);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

/// r,u,v at accepted steps.
std::string trajectory_csv(const Trajectory& traj);

/// Writes content to path, creating parent directories. Throws Error(Io).
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hyperem
