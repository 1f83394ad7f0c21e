#include "pathqv/error.hpp"

namespace pathqv {

void throw_domain(const std::string& what) { throw DomainError(what); }
void throw_config(const std::string& what) { throw ConfigError(what); }

}  // namespace pathqv
