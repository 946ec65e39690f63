#include <atomic>

#include "sgl/error.hpp"
#include "sgl/parallel.hpp"

namespace sgl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInterval: return "InvalidInterval";
    case ErrorKind::InvalidPeriod: return "InvalidPeriod";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::DegenerateTranslates: return "DegenerateTranslates";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::SpectrumMismatch: return "SpectrumMismatch";
    case ErrorKind::InvalidArity: return "InvalidArity";
    case ErrorKind::StepsDependent: return "StepsDependent";
    case ErrorKind::NoCertificate: return "NoCertificate";
    case ErrorKind::NonInterpolating: return "NonInterpolating";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::InvalidTrials: return "InvalidTrials";
    case ErrorKind::InsufficientHits: return "InsufficientHits";
    case ErrorKind::ContainmentViolation: return "ContainmentViolation";
  }
  return "Unknown";
}

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
  const unsigned n = g_threads.load();
  if (n != 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace sgl
