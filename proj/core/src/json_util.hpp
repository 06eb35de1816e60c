#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "isslab/errors.hpp"

namespace isslab::detail {

using nlohmann::json;

[[noreturn]] inline void schema_error(std::string_view context, const std::string& what) {
  throw Error(ErrorCode::scenario_error, std::string(context) + ": " + what);
}

/// Scenario documents are strict: any key outside `allowed` is an error.
inline void require_keys(const json& j, std::initializer_list<std::string_view> allowed,
                         std::string_view context) {
  if (!j.is_object()) schema_error(context, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || (a == key);
    if (!ok) schema_error(context, "unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    schema_error(key, e.what());
  }
}

template <class T>
T get_required(const json& j, const char* key, std::string_view context) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(context, std::string("missing key '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    schema_error(context, e.what());
  }
}

}  // namespace isslab::detail
