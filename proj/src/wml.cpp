// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/wml.hpp"

#include <set>

namespace lid::wml {
namespace {

Value literal(std::string s) { return Value{std::move(s)}; }

Node text_node(std::string s) { return Node{literal(std::move(s))}; }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

Node lower(const Inline& item) {
  return std::visit(
      Overloaded{
          [](const Text& t) { return text_node(t.value); },
          [](const LineBreak&) { return Node{Element{"br", {}, {}}}; },
          [](const Image& img) {
            return Node{Element{"img", {{"src", literal(img.src)}, {"alt", literal(img.alt)}}, {}}};
          },
          [](const Input& in) {
            Element e{"input", {{"name", literal(in.name)}}, {}};
            if (in.masked) e.attributes.emplace_back("type", literal("password"));
            if (in.format) e.attributes.emplace_back("format", literal(*in.format));
            if (in.max_length) e.attributes.emplace_back("maxlength", literal(std::to_string(*in.max_length)));
            if (!in.title.empty()) e.attributes.emplace_back("title", literal(in.title));
            return Node{std::move(e)};
          },
          [](const Link& l) { return Node{Element{"a", {{"href", literal(l.href)}}, {text_node(l.label)}}}; },
          [](const Submit& s) {
            Element go{"go", {{"href", literal(s.href)}, {"method", literal("get")}}, {}};
            for (const auto& [field, variable] : s.fields) {
              go.children.push_back(
                  Node{Element{"postfield", {{"name", literal(field)}, {"value", Value{VariableRef{variable}}}}, {}}});
            }
            return Node{Element{"anchor", {}, {text_node(s.label), Node{std::move(go)}}}};
          },
          [](const Extension& x) {
            Element e{x.tag, {}, {}};
            for (const auto& [k, v] : x.attributes) e.attributes.emplace_back(k, literal(v));
            if (!x.text.empty()) e.children.push_back(text_node(x.text));
            return Node{std::move(e)};
          },
      },
      item);
}

void escape_into(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '$': out += "$$"; break;  // a lone '$' would start a variable reference
      default: out.push_back(c);
    }
  }
}

void write_value(std::string& out, const Value& v) {
  for (const auto& part : v) {
    if (const auto* s = std::get_if<std::string>(&part)) {
      escape_into(out, *s);
    } else {
      out += "$(" + std::get<VariableRef>(part).name + ")";
    }
  }
}

bool line_after(const std::string& tag) { return tag == "wml" || tag == "card"; }

void write_element(std::string& out, const Element& e) {
  out += "<" + e.tag;
  for (const auto& [name, value] : e.attributes) {
    out += " " + name + "=\"";
    write_value(out, value);
    out += "\"";
  }
  if (e.children.empty()) {
    out += "/>";
  } else {
    out += ">";
    if (line_after(e.tag)) out += "\n";
    for (const auto& child : e.children) {
      if (const auto* el = std::get_if<Element>(&child.content)) {
        write_element(out, *el);
      } else {
        write_value(out, std::get<Value>(child.content));
      }
    }
    out += "</" + e.tag + ">";
  }
  if (line_after(e.tag) || e.tag == "p") out += "\n";
}

}  // namespace

void validate(const Deck& deck) {
  if (deck.cards.empty()) throw InvalidDeck("deck has no cards");
  std::set<std::string> ids;
  for (const auto& card : deck.cards) {
    if (card.id.empty()) throw InvalidDeck("card without id");
    if (!ids.insert(card.id).second) throw InvalidDeck("duplicate card id '" + card.id + "'");
    for (const auto& p : card.paragraphs) {
      for (const auto& item : p.content) {
        if (const auto* img = std::get_if<Image>(&item); img && (img->src.empty() || img->alt.empty())) {
          throw InvalidDeck("image needs src and alt text");
        }
        if (const auto* in = std::get_if<Input>(&item); in && in->name.empty()) {
          throw InvalidDeck("input without variable name");
        }
      }
    }
  }
}

Element to_tree(const Deck& deck) {
  validate(deck);
  Element root{"wml", {}, {}};
  for (const auto& card : deck.cards) {
    Element c{"card", {{"id", literal(card.id)}}, {}};
    if (!card.title.empty()) c.attributes.emplace_back("title", literal(card.title));
    for (const auto& p : card.paragraphs) {
      Element para{"p", {}, {}};
      for (const auto& item : p.content) para.children.push_back(lower(item));
      c.children.push_back(Node{std::move(para)});
    }
    root.children.push_back(Node{std::move(c)});
  }
  return root;
}

std::string serialize(const Deck& deck) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += std::string("<!DOCTYPE wml PUBLIC \"") + kPublicId + "\" \"" + kSystemId + "\">\n";
  write_element(out, to_tree(deck));
  return out;
}

Deck build_login_deck(const std::string& action_url, bool require_nonce) {
  Paragraph p;
  p.content.push_back(Text{"User ID:"});
  p.content.push_back(Input{"user", "User ID", false, std::nullopt, std::nullopt});
  p.content.push_back(Text{"PIN:"});
  p.content.push_back(Input{"pin", "PIN", true, "*N", std::nullopt});
  Submit submit{.label = "Get QR", .href = action_url, .fields = {{"user", "user"}, {"pin", "pin"}}};
  if (require_nonce) {
    p.content.push_back(Text{"Nonce:"});
    p.content.push_back(Input{"nonce", "Nonce", false, "N*N", 10});
    submit.fields.emplace_back("nonce", "nonce");
  }
  p.content.push_back(std::move(submit));
  return Deck{{Card{"login", "Sign in", {std::move(p)}}}};
}

Deck build_qr_deck(const std::string& image_url, const std::string& caption) {
  Paragraph image{{Image{image_url, "QR code"}}};
  Paragraph text{{Text{caption}}};
  return Deck{{Card{"qr", "Your QR", {std::move(image), std::move(text)}}}};
}

Deck build_failure_deck(const std::string& message, const std::string& retry_url) {
  Paragraph p{{Text{message}, LineBreak{}, Link{"Try again", retry_url}}};
  return Deck{{Card{"failed", "Error", {std::move(p)}}}};
}

}  // namespace lid::wml
