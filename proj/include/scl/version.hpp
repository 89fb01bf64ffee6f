#ifndef SCL_VERSION_HPP
#define SCL_VERSION_HPP

namespace scl {
inline constexpr const char* kVersion = "scl 0.1.0";
}

#endif  // SCL_VERSION_HPP
