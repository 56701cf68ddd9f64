// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lid::wml {

inline constexpr const char* kContentType = "text/vnd.wap.wml";
inline constexpr const char* kWbxmlContentType = "application/vnd.wap.wmlc";
inline constexpr const char* kPublicId = "-//WAPFORUM//DTD WML 1.3//EN";
inline constexpr const char* kSystemId = "http://www.wapforum.org/DTD/wml13.dtd";

// Deck model: the WML subset the prover flow needs.

struct Text {
  std::string value;
};

struct LineBreak {};

struct Image {
  std::string src;
  std::string alt;
};

struct Input {
  std::string name;
  std::string title;
  bool masked = false;                // type="password"
  std::optional<std::string> format;  // WML input mask, e.g. "N*N"
  std::optional<int> max_length;
};

struct Link {
  std::string label;
  std::string href;
};

/// Anchor wrapping a <go> that submits browser variables as postfields.
struct Submit {
  std::string label;
  std::string href;
  std::vector<std::pair<std::string, std::string>> fields;  // postfield name -> variable name
};

/// Arbitrary element, written verbatim to WML text. Only tags present in the
/// WML token table can be binary-encoded.
struct Extension {
  std::string tag;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;
};

using Inline = std::variant<Text, LineBreak, Image, Input, Link, Submit, Extension>;

struct Paragraph {
  std::vector<Inline> content;
};

struct Card {
  std::string id;
  std::string title;
  std::vector<Paragraph> paragraphs;
};

struct Deck {
  std::vector<Card> cards;
};

class InvalidDeck : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws InvalidDeck unless the deck has at least one card, unique card ids,
/// alt text on every image and a name on every input.
void validate(const Deck& deck);

// Generic element tree shared by the text and binary serializers.

struct VariableRef {
  std::string name;
};
using TextPart = std::variant<std::string, VariableRef>;
using Value = std::vector<TextPart>;

struct Node;

struct Element {
  std::string tag;
  std::vector<std::pair<std::string, Value>> attributes;
  std::vector<Node> children;
};

struct Node {
  std::variant<Element, Value> content;
};

/// Lowers a deck to its <wml> element tree.
Element to_tree(const Deck& deck);

/// Deterministic WML 1.3 document with XML declaration and DOCTYPE.
std::string serialize(const Deck& deck);

class UnsupportedElement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary WML 1.3 (WBXML 1.3, UTF-8, empty string table). Throws
/// UnsupportedElement for Extension items and unknown attributes.
std::vector<std::uint8_t> wbxml_encode(const Deck& deck);

// The prover flow.

/// User id, masked PIN and (optionally) a 6-10 digit nonce, submitted with GET to action_url.
Deck build_login_deck(const std::string& action_url, bool require_nonce = true);

Deck build_qr_deck(const std::string& image_url, const std::string& caption);

/// Shown when login fails or the nonce is malformed; links back to retry_url.
Deck build_failure_deck(const std::string& message, const std::string& retry_url);

}  // namespace lid::wml
