#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppcheck/errors.hpp"

namespace ppcheck {

// Minimal XML subset used by package files: elements with double-quoted
// attributes, nested elements, self-closing tags, the five standard entities,
// and `<!-- -->` comments. No text content, namespaces, or declarations
// (an attribute name may contain ':' literally, e.g. "android:name").
struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlElement> children;

  std::optional<std::string> attr(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return v;
    }
    return std::nullopt;
  }
};

namespace detail {

class XmlParser {
 public:
  explicit XmlParser(std::string_view input) : in_(input) {}

  XmlElement parse_document() {
    skip_ws_and_comments();
    XmlElement root = parse_element();
    skip_ws_and_comments();
    if (pos_ != in_.size()) fail("trailing content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::MalformedXml,
                msg + " at offset " + std::to_string(pos_));
  }

  bool eof() const { return pos_ >= in_.size(); }
  char peek() const { return eof() ? '\0' : in_[pos_]; }

  void skip_ws_and_comments() {
    for (;;) {
      while (!eof() && (in_[pos_] == ' ' || in_[pos_] == '\t' ||
                        in_[pos_] == '\n' || in_[pos_] == '\r')) {
        ++pos_;
      }
      if (in_.substr(pos_).starts_with("<!--")) {
        auto end = in_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 3;
        continue;
      }
      return;
    }
  }

  static bool is_name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' ||
           c == '.' || c == ':';
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    std::size_t start = pos_;
    while (!eof() && is_name_char(in_[pos_])) ++pos_;
    return std::string(in_.substr(start, pos_ - start));
  }

  std::string parse_quoted_value() {
    if (peek() != '"') fail("expected '\"'");
    ++pos_;
    std::string out;
    while (!eof() && in_[pos_] != '"') {
      char c = in_[pos_];
      if (c == '<') fail("'<' not allowed in attribute value");
      if (c == '&') {
        out += parse_entity();
      } else {
        out += c;
        ++pos_;
      }
    }
    if (eof()) fail("unterminated attribute value");
    ++pos_;
    return out;
  }

  char parse_entity() {
    auto rest = in_.substr(pos_);
    struct Ent { std::string_view text; char value; };
    static constexpr Ent kEntities[] = {
        {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'},
        {"&quot;", '"'}, {"&apos;", '\''},
    };
    for (const auto& e : kEntities) {
      if (rest.starts_with(e.text)) {
        pos_ += e.text.size();
        return e.value;
      }
    }
    fail("unknown entity");
  }

  XmlElement parse_element() {
    if (peek() != '<') fail("expected '<'");
    ++pos_;
    XmlElement el;
    el.name = parse_name();
    for (;;) {
      skip_ws_and_comments();
      if (eof()) fail("unterminated element");
      if (peek() == '/') {
        ++pos_;
        if (peek() != '>') fail("expected '>' after '/'");
        ++pos_;
        return el;
      }
      if (peek() == '>') {
        ++pos_;
        parse_children(el);
        return el;
      }
      std::string key = parse_name();
      for (const auto& [k, v] : el.attributes) {
        if (k == key) fail("duplicate attribute '" + key + "'");
      }
      if (peek() != '=') fail("expected '=' after attribute name");
      ++pos_;
      el.attributes.emplace_back(key, parse_quoted_value());
    }
  }

  void parse_children(XmlElement& el) {
    for (;;) {
      skip_ws_and_comments();
      if (eof()) fail("missing closing tag for '" + el.name + "'");
      if (in_.substr(pos_).starts_with("</")) {
        pos_ += 2;
        std::string closing = parse_name();
        if (closing != el.name) {
          fail("mismatched closing tag '" + closing + "'");
        }
        skip_ws_and_comments();
        if (peek() != '>') fail("expected '>' in closing tag");
        ++pos_;
        return;
      }
      if (peek() != '<') fail("text content is not supported");
      el.children.push_back(parse_element());
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline XmlElement parse_xml(std::string_view input) {
  return detail::XmlParser(input).parse_document();
}

inline std::string xml_escape(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline void write_xml(const XmlElement& el, std::string& out, int indent = 0) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  out += '<';
  out += el.name;
  for (const auto& [k, v] : el.attributes) {
    out += ' ';
    out += k;
    out += "=\"";
    out += xml_escape(v);
    out += '"';
  }
  if (el.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& child : el.children) write_xml(child, out, indent + 1);
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  out += "</";
  out += el.name;
  out += ">\n";
}

}  // namespace ppcheck
