#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace catcoh {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RelationNotPartialOrder : Error { using Error::Error; };
struct NotAMonoid : Error { using Error::Error; };
struct ObjectOutOfRange : Error { using Error::Error; };
struct NotAFunctor : Error { using Error::Error; };
struct ElementNotInT : Error { using Error::Error; };
struct DegreeBeyondTrusted : Error { using Error::Error; };
struct NotAChainMap : Error { using Error::Error; };
struct RankOverflowBudget : Error { using Error::Error; };
struct NotAField : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

/// Accumulates constraint violations; empty report means the object is valid.
class ValidationReport {
 public:
  void fail(std::string msg) { problems_.push_back(std::move(msg)); }
  void check(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
  }
  void merge(const ValidationReport& other, const std::string& prefix = "") {
    for (const auto& p : other.problems_) problems_.push_back(prefix.empty() ? p : prefix + ": " + p);
  }
  [[nodiscard]] bool ok() const { return problems_.empty(); }
  [[nodiscard]] const std::vector<std::string>& problems() const { return problems_; }
  [[nodiscard]] std::string summary(std::size_t max_items = 8) const {
    if (ok()) return "valid";
    std::string out;
    std::size_t shown = 0;
    for (const auto& p : problems_) {
      if (shown++ == max_items) {
        out += "... (" + std::to_string(problems_.size() - max_items) + " more)";
        break;
      }
      out += p;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> problems_;
};

inline void throw_if_invalid(const ValidationReport& r, const std::string& what) {
  if (!r.ok()) throw ValidationError(what + ": " + r.summary());
}

}  // namespace catcoh
