#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "elearn/error.hpp"

namespace elearn {

// Specialize with `static constexpr std::array<std::string_view, N> names`
// listing every variant in declaration order.
template <class E>
struct EnumNames;

template <class E>
constexpr std::size_t variant_count() {
  return EnumNames<E>::names.size();
}

template <class E>
constexpr bool is_declared(E value) {
  auto i = static_cast<std::size_t>(value);
  return i < variant_count<E>();
}

template <class E>
constexpr std::string_view enum_name(E value) {
  return is_declared(value) ? EnumNames<E>::names[static_cast<std::size_t>(value)]
                            : std::string_view("?");
}

template <class E>
std::optional<E> parse_enum(std::string_view text) {
  const auto& names = EnumNames<E>::names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == text) return static_cast<E>(i);
  }
  return std::nullopt;
}

// Throws ValidationError(field) for an unknown name.
template <class E>
E parse_enum_or_fail(std::string_view text, const std::string& field) {
  auto parsed = parse_enum<E>(text);
  if (!parsed) fail(ErrorCode::ValidationError, field);
  return *parsed;
}

template <class E>
constexpr auto all_variants() {
  std::array<E, variant_count<E>()> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<E>(i);
  return out;
}

}  // namespace elearn
