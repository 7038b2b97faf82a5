#ifndef ORCH_ERROR_HPP
#define ORCH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace orch {

// Base for all orchestrator errors. `code()` is a stable machine-readable
// token; it ends up in intent failure reasons and HTTP error bodies, so
// derived classes must keep their codes fixed.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace orch

#endif  // ORCH_ERROR_HPP
