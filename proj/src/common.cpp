#include <string>

#include "infbeta/errors.hpp"
#include "infbeta/inflated.hpp"
#include "infbeta/optimize.hpp"

namespace infbeta {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Bezi:
      return "bezi";
    case Family::Beoi:
      return "beoi";
    case Family::Beinf:
      return "beinf";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "bezi") return Family::Bezi;
  if (name == "beoi") return Family::Beoi;
  if (name == "beinf") return Family::Beinf;
  throw DomainError("unknown family '" + std::string(name) + "' (expected bezi, beoi or beinf)");
}

std::string_view status_name(OptimStatus s) {
  switch (s) {
    case OptimStatus::Converged:
      return "converged";
    case OptimStatus::MaxIterations:
      return "max_iterations";
    case OptimStatus::Stalled:
      return "stalled";
  }
  return "unknown";
}

}  // namespace infbeta
