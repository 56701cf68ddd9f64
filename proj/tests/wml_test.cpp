// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/wml.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <set>

namespace lid::wml {
namespace {

std::vector<std::uint8_t> load_golden(const std::string& name) {
  std::ifstream in(std::string(LID_GOLDEN_DIR) + "/" + name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

// Minimal XML checker: balanced tags, quoted attributes, known entities only.
bool well_formed(const std::string& doc, std::string* why) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  auto fail = [&](const std::string& m) {
    *why = m + " at " + std::to_string(i);
    return false;
  };
  bool seen_root = false;
  while (i < doc.size()) {
    if (doc[i] == '<') {
      if (doc.compare(i, 2, "<?") == 0 || doc.compare(i, 2, "<!") == 0) {
        i = doc.find('>', i);
        if (i == std::string::npos) return fail("unterminated declaration");
        ++i;
        continue;
      }
      bool closing = doc[i + 1] == '/';
      std::size_t j = i + (closing ? 2 : 1);
      std::size_t name_start = j;
      while (j < doc.size() && (std::isalnum(static_cast<unsigned char>(doc[j])) || doc[j] == '-')) ++j;
      std::string name = doc.substr(name_start, j - name_start);
      if (name.empty()) return fail("empty tag name");
      if (closing) {
        if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
        stack.pop_back();
        if (doc[j] != '>') return fail("junk in closing tag");
        i = j + 1;
        continue;
      }
      if (stack.empty() && seen_root) return fail("second root");
      seen_root = true;
      std::set<std::string> attrs;
      for (;;) {
        while (doc[j] == ' ') ++j;
        if (doc.compare(j, 2, "/>") == 0) {
          j += 2;
          break;
        }
        if (doc[j] == '>') {
          stack.push_back(name);
          ++j;
          break;
        }
        std::size_t a = j;
        while (std::isalpha(static_cast<unsigned char>(doc[j]))) ++j;
        std::string attr = doc.substr(a, j - a);
        if (attr.empty() || doc[j] != '=' || doc[j + 1] != '"') return fail("unquoted attribute");
        if (!attrs.insert(attr).second) return fail("duplicate attribute");
        std::size_t end = doc.find('"', j + 2);
        std::string value = doc.substr(j + 2, end - j - 2);
        if (value.find('<') != std::string::npos) return fail("'<' in attribute");
        j = end + 1;
      }
      i = j;
    } else if (doc[i] == '&') {
      static const char* kEntities[] = {"&amp;", "&lt;", "&gt;", "&quot;", "&apos;"};
      bool ok = false;
      for (const char* e : kEntities) ok = ok || doc.compare(i, std::strlen(e), e) == 0;
      if (!ok) return fail("bare '&'");
      ++i;
    } else {
      if (!stack.empty() || !std::isspace(static_cast<unsigned char>(doc[i]))) {
        if (stack.empty()) return fail("text outside root");
      }
      ++i;
    }
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  return seen_root;
}

void expect_well_formed(const std::string& doc) {
  std::string why;
  EXPECT_TRUE(well_formed(doc, &why)) << why << "\n" << doc;
}

TEST(WmlTest, DocumentPrologue) {
  std::string doc = serialize(build_login_deck("/auth"));
  EXPECT_EQ(doc.rfind("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!DOCTYPE wml PUBLIC "
                      "\"-//WAPFORUM//DTD WML 1.3//EN\" \"http://www.wapforum.org/DTD/wml13.dtd\">\n<wml>",
                      0),
            0u);
  expect_well_formed(doc);
}

TEST(WmlTest, LoginDeckStructure) {
  std::string doc = serialize(build_login_deck("http://h/auth"));
  EXPECT_EQ(count(doc, "<input "), 3u);
  EXPECT_EQ(count(doc, "<anchor>"), 1u);
  EXPECT_EQ(count(doc, "<postfield "), 3u);
  EXPECT_NE(doc.find("<input name=\"pin\" type=\"password\""), std::string::npos);
  EXPECT_NE(doc.find("<input name=\"nonce\" format=\"N*N\" maxlength=\"10\""), std::string::npos);
  EXPECT_NE(doc.find("<go href=\"http://h/auth\" method=\"get\">"), std::string::npos);
  for (const char* v : {"user", "pin", "nonce"}) {
    EXPECT_NE(doc.find(std::string("<postfield name=\"") + v + "\" value=\"$(" + v + ")\"/>"), std::string::npos);
  }
}

TEST(WmlTest, NonceMaskIsNumericOnly) {
  const Deck deck = build_login_deck("/auth");
  const auto& p = deck.cards.at(0).paragraphs.at(0);
  const Input* nonce = nullptr;
  for (const auto& item : p.content) {
    if (const auto* in = std::get_if<Input>(&item); in && in->name == "nonce") nonce = in;
  }
  ASSERT_NE(nonce, nullptr);
  ASSERT_TRUE(nonce->format.has_value());
  // WML mask characters: N = digit; a leading count or '*' repeats the next one.
  for (char c : *nonce->format) EXPECT_TRUE(c == 'N' || c == '*' || std::isdigit(static_cast<unsigned char>(c)));
  EXPECT_EQ(nonce->max_length, 10);
}

TEST(WmlTest, NonceFreeVariant) {
  std::string doc = serialize(build_login_deck("/auth", false));
  EXPECT_EQ(count(doc, "<input "), 2u);
  EXPECT_EQ(count(doc, "<postfield "), 2u);
  EXPECT_EQ(doc.find("nonce"), std::string::npos);
  expect_well_formed(doc);
}

TEST(WmlTest, QrDeck) {
  std::string doc = serialize(build_qr_deck("/qr/abc.wbmp", "Show this to the verifier"));
  EXPECT_NE(doc.find("<img src=\"/qr/abc.wbmp\" alt=\""), std::string::npos);
  EXPECT_EQ(count(doc, "Show this to the verifier"), 1u);
  EXPECT_EQ(count(doc, "<card "), 1u);
  expect_well_formed(doc);
}

TEST(WmlTest, EscapesImageUrl) {
  std::string doc = serialize(build_qr_deck("/qr/x.wbmp?a=1&b=2", "c"));
  EXPECT_NE(doc.find("src=\"/qr/x.wbmp?a=1&amp;b=2\""), std::string::npos);
  expect_well_formed(doc);
}

TEST(WmlTest, EscapesText) {
  Deck deck{{Card{"c", "t", {Paragraph{{Text{"a<b"}}}}}}};
  std::string doc = serialize(deck);
  EXPECT_NE(doc.find("a&lt;b"), std::string::npos);
  deck.cards[0].paragraphs[0].content[0] = Text{"\"x\" & 'y' > $5"};
  doc = serialize(deck);
  EXPECT_NE(doc.find("&quot;x&quot; &amp; &apos;y&apos; &gt; $$5"), std::string::npos);
  expect_well_formed(doc);
}

TEST(WmlTest, MinimalDeck) {
  std::string doc = serialize(Deck{{Card{"only", "", {}}}});
  EXPECT_EQ(count(doc, "<card "), 1u);
  EXPECT_NE(doc.find("<card id=\"only\"/>"), std::string::npos);
  expect_well_formed(doc);
}

TEST(WmlTest, Deterministic) {
  auto deck = build_login_deck("/auth");
  EXPECT_EQ(serialize(deck), serialize(deck));
  EXPECT_EQ(wbxml_encode(deck), wbxml_encode(deck));
}

TEST(WmlTest, DeckInvariants) {
  EXPECT_THROW(serialize(Deck{}), InvalidDeck);
  EXPECT_THROW(serialize(Deck{{Card{"a", "", {}}, Card{"a", "", {}}}}), InvalidDeck);
  EXPECT_THROW(serialize(Deck{{Card{"a", "", {Paragraph{{Image{"/x.wbmp", ""}}}}}}}), InvalidDeck);
  EXPECT_THROW(serialize(Deck{{Card{"a", "", {Paragraph{{Input{}}}}}}}), InvalidDeck);
  EXPECT_THROW(wbxml_encode(Deck{}), InvalidDeck);
}

std::string random_text(std::mt19937& rng) {
  static const std::string kChars = "ab<>&\"'$ /:?=";
  std::string s(rng() % 6 + 1, ' ');
  for (auto& c : s) c = kChars[rng() % kChars.size()];
  return s;
}

TEST(WmlTest, InjectiveAndWellFormedOverBuilders) {
  std::mt19937 rng(7);
  std::map<std::string, std::string> seen;  // document -> builder arguments
  for (int i = 0; i < 600; ++i) {
    std::string a = random_text(rng), b = random_text(rng);
    std::string key;
    Deck deck;
    switch (i % 4) {
      case 0: key = "login1|" + a; deck = build_login_deck(a); break;
      case 1: key = "login0|" + a; deck = build_login_deck(a, false); break;
      case 2: key = "qr|" + a + "|" + b; deck = build_qr_deck(a, b); break;
      default: key = "fail|" + a + "|" + b; deck = build_failure_deck(a, b); break;
    }
    std::string doc = serialize(deck);
    expect_well_formed(doc);
    auto [it, inserted] = seen.emplace(doc, key);
    if (!inserted) {
      EXPECT_EQ(it->second, key) << "two decks share a document";
    }
    EXPECT_NO_THROW(wbxml_encode(deck));
  }
}

TEST(WbxmlTest, HeaderPrefix) {
  auto bytes = wbxml_encode(Deck{{Card{"c", "", {}}}});
  ASSERT_GE(bytes.size(), 4u);
  EXPECT_EQ(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 4), (std::vector<std::uint8_t>{0x03, 0x0A, 0x6A, 0x00}));
  EXPECT_EQ(bytes, load_golden("deck_empty.wbxml"));
}

TEST(WbxmlTest, ProtocolDeckGoldens) {
  EXPECT_EQ(wbxml_encode(build_login_deck("http://lid.example/auth")), load_golden("deck_login.wbxml"));
  EXPECT_EQ(wbxml_encode(build_login_deck("http://lid.example/auth", false)), load_golden("deck_login_nononce.wbxml"));
  EXPECT_EQ(wbxml_encode(build_qr_deck("http://lid.example/qr/K7Q2M9XW4T.wbmp", "Show this code to the verifier")),
            load_golden("deck_qr.wbxml"));
  EXPECT_EQ(wbxml_encode(build_failure_deck("Login failed", "http://lid.example/login")),
            load_golden("deck_failed.wbxml"));
}

TEST(WbxmlTest, ShorterThanText) {
  std::vector<Deck> decks = {
      build_login_deck("http://lid.example/auth"), build_login_deck("http://lid.example/auth", false),
      build_qr_deck("http://lid.example/qr/K7Q2M9XW4T.wbmp", "Show this code to the verifier"),
      build_failure_deck("Login failed", "http://lid.example/login")};
  for (const auto& d : decks) EXPECT_LT(wbxml_encode(d).size(), serialize(d).size());
}

TEST(WbxmlTest, VariablesAndLiteralDollar) {
  // postfield value="$(user)" -> value token, EXT_I_2 "user" NUL
  auto bytes = wbxml_encode(build_login_deck("/a"));
  const std::vector<std::uint8_t> ref = {0x4D, 0x42, 'u', 's', 'e', 'r', 0x00};
  EXPECT_NE(std::search(bytes.begin(), bytes.end(), ref.begin(), ref.end()), bytes.end());
  // Literal '$' is carried as-is inside STR_I; only the text form doubles it.
  auto text = wbxml_encode(Deck{{Card{"c", "", {Paragraph{{Text{"$5"}}}}}}});
  const std::vector<std::uint8_t> lit = {0x60, 0x03, '$', '5', 0x00, 0x01};
  EXPECT_NE(std::search(text.begin(), text.end(), lit.begin(), lit.end()), text.end());
}

TEST(WbxmlTest, AttributePrefixTokens) {
  auto bytes = wbxml_encode(build_failure_deck("x", "https://h/login"));
  const std::vector<std::uint8_t> ref = {0x4C, 0x03, 'h', '/', 'l', 'o', 'g', 'i', 'n', 0x00};
  EXPECT_NE(std::search(bytes.begin(), bytes.end(), ref.begin(), ref.end()), bytes.end());
  auto rel = wbxml_encode(build_failure_deck("x", "/login"));
  const std::vector<std::uint8_t> plain = {0x4A, 0x03, '/', 'l'};
  EXPECT_NE(std::search(rel.begin(), rel.end(), plain.begin(), plain.end()), rel.end());
}

TEST(WbxmlTest, UnsupportedElement) {
  Deck deck{{Card{"c", "", {Paragraph{{Extension{"table", {}, "x"}}}}}}};
  EXPECT_THROW(wbxml_encode(deck), UnsupportedElement);
  EXPECT_NO_THROW(serialize(deck));
}

}  // namespace
}  // namespace lid::wml
