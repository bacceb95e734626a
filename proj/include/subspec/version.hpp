#ifndef SUBSPEC_VERSION_HPP
#define SUBSPEC_VERSION_HPP

namespace subspec {
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "subspec";
}  // namespace subspec

#endif
