// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include <string_view>

#include "lid/wml.hpp"

namespace lid::wml {
namespace {

constexpr std::uint8_t kVersion = 0x03;
constexpr std::uint8_t kWml13PublicId = 0x0A;
constexpr std::uint8_t kUtf8Mib = 0x6A;

constexpr std::uint8_t kEnd = 0x01;
constexpr std::uint8_t kStrI = 0x03;
constexpr std::uint8_t kExtI2 = 0x42;  // variable reference, no conversion
constexpr std::uint8_t kHasAttributes = 0x80;
constexpr std::uint8_t kHasContent = 0x40;

struct TagToken {
  std::string_view tag;
  std::uint8_t token;
};

constexpr TagToken kTags[] = {
    {"a", 0x1C},     {"p", 0x20},    {"postfield", 0x21}, {"anchor", 0x22}, {"br", 0x26},
    {"card", 0x27},  {"go", 0x2B},   {"img", 0x2E},       {"input", 0x2F},  {"wml", 0x3F},
};

// Attribute start tokens; a non-empty prefix means the token also stands for
// the start of the value.
struct AttrToken {
  std::string_view name;
  std::string_view prefix;
  std::uint8_t token;
};

constexpr AttrToken kAttrs[] = {
    {"alt", "", 0x0C},
    {"format", "", 0x12},
    {"maxlength", "", 0x1A},
    {"method", "get", 0x1B},
    {"method", "post", 0x1C},
    {"name", "", 0x21},
    {"src", "", 0x32},
    {"src", "http://", 0x58},
    {"src", "https://", 0x59},
    {"title", "", 0x36},
    {"type", "", 0x37},
    {"type", "password", 0x3B},
    {"type", "text", 0x48},
    {"href", "", 0x4A},
    {"href", "http://", 0x4B},
    {"href", "https://", 0x4C},
    {"value", "", 0x4D},
    {"id", "", 0x55},
};

class Writer {
 public:
  std::vector<std::uint8_t> bytes;

  void byte(std::uint8_t b) { bytes.push_back(b); }

  void inline_string(std::string_view s) {
    if (s.empty()) return;
    byte(kStrI);
    bytes.insert(bytes.end(), s.begin(), s.end());
    byte(0x00);
  }

  void value(const Value& v, std::size_t skip) {
    for (const auto& part : v) {
      if (const auto* s = std::get_if<std::string>(&part)) {
        inline_string(std::string_view(*s).substr(skip));
        skip = 0;
      } else {
        byte(kExtI2);
        const auto& name = std::get<VariableRef>(part).name;
        bytes.insert(bytes.end(), name.begin(), name.end());
        byte(0x00);
      }
    }
  }

  void attribute(const std::string& name, const Value& v) {
    const std::string* head = v.empty() ? nullptr : std::get_if<std::string>(&v.front());
    const AttrToken* best = nullptr;
    for (const auto& a : kAttrs) {
      if (a.name != name) continue;
      if (!a.prefix.empty() && (head == nullptr || !std::string_view(*head).starts_with(a.prefix))) continue;
      if (best == nullptr || a.prefix.size() > best->prefix.size()) best = &a;
    }
    if (best == nullptr) throw UnsupportedElement("attribute '" + name + "' has no WBXML token");
    byte(best->token);
    value(v, best->prefix.size());
  }

  void element(const Element& e) {
    std::uint8_t token = 0;
    for (const auto& t : kTags) {
      if (t.tag == e.tag) token = t.token;
    }
    if (token == 0) throw UnsupportedElement("element <" + e.tag + "> is outside the supported subset");
    if (!e.attributes.empty()) token |= kHasAttributes;
    if (!e.children.empty()) token |= kHasContent;
    byte(token);
    if (!e.attributes.empty()) {
      for (const auto& [name, v] : e.attributes) attribute(name, v);
      byte(kEnd);
    }
    if (!e.children.empty()) {
      for (const auto& child : e.children) {
        if (const auto* el = std::get_if<Element>(&child.content)) {
          element(*el);
        } else {
          value(std::get<Value>(child.content), 0);
        }
      }
      byte(kEnd);
    }
  }
};

void reject_extensions(const Deck& deck) {
  for (const auto& card : deck.cards) {
    for (const auto& p : card.paragraphs) {
      for (const auto& item : p.content) {
        if (const auto* x = std::get_if<Extension>(&item)) {
          throw UnsupportedElement("element <" + x->tag + "> is outside the supported subset");
        }
      }
    }
  }
}

}  // namespace

std::vector<std::uint8_t> wbxml_encode(const Deck& deck) {
  reject_extensions(deck);
  Writer w;
  w.byte(kVersion);
  w.byte(kWml13PublicId);
  w.byte(kUtf8Mib);
  w.byte(0x00);  // string table length
  w.element(to_tree(deck));
  return std::move(w.bytes);
}

}  // namespace lid::wml
