#ifndef NRW_ERROR_HPP
#define NRW_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nrw {

/// Error thrown by library operations; `code` is a stable machine-readable tag.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), m_code(std::move(code)) {}

  const std::string& code() const { return m_code; }

private:
  std::string m_code;
};

} // namespace nrw

#endif
