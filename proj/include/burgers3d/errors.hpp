#pragma once

#include <stdexcept>
#include <string>

namespace burgers3d {

/// Invalid grid/solver/ensemble configuration (mismatched resolutions,
/// undersized dealiasing grids, bad step counts, ...).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed data: broken Hermitian symmetry, non-real zero modes,
/// unparsable files.
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// NaN/Inf encountered mid-integration. Carries the time of the last valid
/// state; the partially filled record is returned alongside by the caller.
class NumericalFailure : public std::runtime_error {
  public:
    NumericalFailure(const std::string& what, double last_valid_time)
        : std::runtime_error(what), last_valid_time_(last_valid_time) {}
    double last_valid_time() const { return last_valid_time_; }

  private:
    double last_valid_time_;
};

} // namespace burgers3d
