#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "elearn/enum_names.hpp"
#include "elearn/persistence.hpp"

// Strict field accessors for decoding request bodies and stored records.
// Each throws ValidationError naming the field on absence or a type mismatch.
namespace elearn::fields {

inline const Json& require(const Json& j, const std::string& field) {
  if (!j.is_object()) fail(ErrorCode::BadRequest, "body", "expected a JSON object");
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) fail(ErrorCode::ValidationError, field);
  return *it;
}

inline bool has(const Json& j, const std::string& field) {
  auto it = j.find(field);
  return it != j.end() && !it->is_null();
}

inline std::string string(const Json& j, const std::string& field) {
  const auto& v = require(j, field);
  if (!v.is_string()) fail(ErrorCode::ValidationError, field);
  return v.get<std::string>();
}

inline std::string string_or(const Json& j, const std::string& field,
                             std::string fallback) {
  return has(j, field) ? string(j, field) : std::move(fallback);
}

inline std::int64_t integer(const Json& j, const std::string& field) {
  const auto& v = require(j, field);
  if (!v.is_number_integer()) fail(ErrorCode::ValidationError, field);
  return v.get<std::int64_t>();
}

inline double number(const Json& j, const std::string& field) {
  const auto& v = require(j, field);
  if (!v.is_number()) fail(ErrorCode::ValidationError, field);
  return v.get<double>();
}

inline bool boolean(const Json& j, const std::string& field) {
  const auto& v = require(j, field);
  if (!v.is_boolean()) fail(ErrorCode::ValidationError, field);
  return v.get<bool>();
}

template <class E>
E enumeration(const Json& j, const std::string& field) {
  return parse_enum_or_fail<E>(string(j, field), field);
}

// Missing or null yields nullopt; a present but unknown name still fails.
template <class E>
std::optional<E> optional_enumeration(const Json& j, const std::string& field) {
  if (!has(j, field)) return std::nullopt;
  return enumeration<E>(j, field);
}

template <class E>
Json optional_name(const std::optional<E>& value) {
  return value ? Json(std::string(enum_name(*value))) : Json(nullptr);
}

}  // namespace elearn::fields
