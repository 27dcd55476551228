#include "stpa/parse.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stpa {

namespace {

struct Token {
  enum class Type { Word, String, Integer, LBracket, RBracket, Comma, End };

  Type type = Type::End;
  std::string text;     // word spelling or decoded string value
  long long number = 0; // for Integer
  SourceSpan span;
};

const char* token_name(Token::Type type) {
  switch (type) {
    case Token::Type::Word: return "word";
    case Token::Type::String: return "string";
    case Token::Type::Integer: return "integer";
    case Token::Type::LBracket: return "'['";
    case Token::Type::RBracket: return "']'";
    case Token::Type::Comma: return "','";
    case Token::Type::End: return "end of line";
  }
  return "token";
}

bool is_word_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

bool is_word_char(char c) {
  return is_word_start(c) || (c >= '0' && c <= '9') || c == '_' || c == '.';
}

class Parser {
 public:
  Parser(std::string_view text, std::string file_name)
      : text_(text), file_(std::move(file_name)) {}

  ParseResult run() {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t eol = text_.find('\n', pos);
      std::size_t end = (eol == std::string_view::npos) ? text_.size() : eol;
      std::string_view line = text_.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      parse_line(line, line_no);
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
    }
    if (!seen_header_ && !header_error_reported_) {
      error("E003", "missing 'model' header", SourceSpan{file_, 1, 1, 0});
    }

    ParseResult result;
    result.diagnostics = std::move(diagnostics_);
    if (!has_errors(result.diagnostics)) {
      sort_assessments(model_);
      result.model = std::move(model_);
    }
    return result;
  }

 private:
  // -- diagnostics ---------------------------------------------------------

  void error(std::string code, std::string message, SourceSpan span) {
    diagnostics_.push_back(
        Diagnostic{Severity::Error, std::move(code), std::move(message), std::move(span)});
  }

  SourceSpan span_at(int line, std::size_t column, std::size_t length) const {
    return SourceSpan{file_, line, static_cast<int>(column) + 1, static_cast<int>(length)};
  }

  // -- lexing --------------------------------------------------------------

  // Tokenizes one line; false means a lexical error was reported and the
  // line should be skipped. `//` starts a comment outside strings.
  bool lex_line(std::string_view line, int line_no, std::vector<Token>& out) {
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (c == ' ' || c == '\t') {
        ++i;
        continue;
      }
      if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') break;
      if (c == '"') {
        std::size_t start = i++;
        std::string value;
        bool closed = false;
        while (i < line.size()) {
          char s = line[i];
          if (s == '"') {
            closed = true;
            ++i;
            break;
          }
          if (s == '\\') {
            if (i + 1 >= line.size()) break;
            char esc = line[i + 1];
            switch (esc) {
              case '\\': value += '\\'; break;
              case '"': value += '"'; break;
              case 'n': value += '\n'; break;
              case 'r': value += '\r'; break;
              case 't': value += '\t'; break;
              default:
                error("E005", std::string("invalid escape '\\") + esc + "' in string",
                      span_at(line_no, i, 2));
                return false;
            }
            i += 2;
            continue;
          }
          value += s;
          ++i;
        }
        if (!closed) {
          error("E005", "unterminated string", span_at(line_no, start, line.size() - start));
          return false;
        }
        out.push_back(Token{Token::Type::String, std::move(value), 0,
                            span_at(line_no, start, i - start)});
        continue;
      }
      if (is_word_start(c)) {
        std::size_t start = i;
        while (i < line.size() && is_word_char(line[i])) ++i;
        out.push_back(Token{Token::Type::Word, std::string(line.substr(start, i - start)), 0,
                            span_at(line_no, start, i - start)});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = i;
        while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
        std::string digits(line.substr(start, i - start));
        Token token{Token::Type::Integer, digits, 0, span_at(line_no, start, i - start)};
        try {
          token.number = std::stoll(digits);
        } catch (const std::out_of_range&) {
          error("E006", "integer out of range", token.span);
          return false;
        }
        out.push_back(std::move(token));
        continue;
      }
      if (c == '[' || c == ']' || c == ',') {
        Token::Type type = c == '[' ? Token::Type::LBracket
                          : c == ']' ? Token::Type::RBracket
                                     : Token::Type::Comma;
        out.push_back(Token{type, std::string(1, c), 0, span_at(line_no, i, 1)});
        ++i;
        continue;
      }
      error("E001", std::string("unexpected character '") + c + "'", span_at(line_no, i, 1));
      return false;
    }
    out.push_back(Token{Token::Type::End, "", 0, span_at(line_no, line.size(), 0)});
    return true;
  }

  // -- token cursor --------------------------------------------------------

  const Token& peek() const { return tokens_[cursor_]; }

  const Token& advance() { return tokens_[cursor_++]; }

  bool at_end() const { return peek().type == Token::Type::End; }

  // Reports E001 and returns nullptr when the next token is not `type`.
  const Token* expect(Token::Type type, std::string_view what) {
    if (peek().type != type) {
      error("E001",
            "expected " + std::string(what) + ", found " + std::string(token_name(peek().type)),
            peek().span);
      return nullptr;
    }
    return &advance();
  }

  bool expect_keyword(std::string_view keyword) {
    if (peek().type != Token::Type::Word || peek().text != keyword) {
      error("E001",
            "expected '" + std::string(keyword) + "', found " +
                std::string(token_name(peek().type)),
            peek().span);
      return false;
    }
    advance();
    return true;
  }

  std::optional<Identifier> expect_id(std::string_view what) {
    const Token* token = expect(Token::Type::Word, what);
    if (!token) return std::nullopt;
    return Identifier(token->text);
  }

  std::optional<std::string> expect_string(std::string_view what) {
    const Token* token = expect(Token::Type::String, what);
    if (!token) return std::nullopt;
    return token->text;
  }

  // `[id, id, ...]`; empty lists are rejected (E004).
  std::optional<std::vector<Identifier>> expect_id_list(std::string_view what) {
    const Token* open = expect(Token::Type::LBracket, "'['");
    if (!open) return std::nullopt;
    std::vector<Identifier> ids;
    if (peek().type == Token::Type::RBracket) {
      error("E004", "empty " + std::string(what) + " list", open->span);
      return std::nullopt;
    }
    while (true) {
      std::optional<Identifier> id = expect_id("identifier");
      if (!id) return std::nullopt;
      ids.push_back(std::move(*id));
      if (peek().type == Token::Type::Comma) {
        advance();
        continue;
      }
      if (!expect(Token::Type::RBracket, "',' or ']'")) return std::nullopt;
      return ids;
    }
  }

  bool expect_statement_end() {
    if (at_end()) return true;
    error("E001", "unexpected token after statement", peek().span);
    return false;
  }

  // -- duplicate handling ----------------------------------------------------

  template <typename Map, typename Element>
  void insert_unique(Map& map, Element element, std::string_view kind_name,
                     const SourceSpan& id_span) {
    auto [it, inserted] = map.emplace(element.id, std::move(element));
    if (!inserted) {
      error("E002",
            "duplicate " + std::string(kind_name) + " identifier '" + it->first.str() + "'",
            id_span);
    }
  }

  // -- statements ------------------------------------------------------------

  void parse_line(std::string_view line, int line_no) {
    std::vector<Token> tokens;
    if (!lex_line(line, line_no, tokens)) return;
    tokens_ = std::move(tokens);
    cursor_ = 0;
    if (at_end()) return;  // blank or comment-only line

    const Token* keyword = expect(Token::Type::Word, "statement keyword");
    if (!keyword) return;
    const std::string& kw = keyword->text;

    if (kw == "model") {
      parse_model_header(keyword->span);
      return;
    }
    if (!seen_header_ && !header_error_reported_) {
      // Report the misplaced-header condition once, then keep parsing so
      // later mistakes still surface.
      header_error_reported_ = true;
      error("E003", "expected 'model' header as first statement", keyword->span);
    }
    if (kw == "loss") {
      parse_loss();
    } else if (kw == "hazard") {
      parse_hazard();
    } else if (kw == "constraint") {
      parse_constraint();
    } else if (kw == "entity") {
      parse_entity();
    } else if (kw == "ca") {
      parse_control_action();
    } else if (kw == "fb") {
      parse_feedback();
    } else if (kw == "uca") {
      parse_uca();
    } else if (kw == "assessed") {
      parse_assessment();
    } else if (kw == "scenario") {
      parse_scenario();
    } else if (kw == "mitigation") {
      parse_mitigation();
    } else {
      error("E001", "unknown statement '" + kw + "'", keyword->span);
    }
  }

  void parse_model_header(const SourceSpan& kw_span) {
    if (seen_header_) {
      error("E003", "duplicate 'model' header", kw_span);
      return;
    }
    // A malformed header still counts as seen, so later statements do not
    // pile a missing-header error on top of the field diagnostics.
    seen_header_ = true;
    std::optional<std::string> name = expect_string("model name string");
    if (!name) return;
    if (!expect_keyword("context")) return;
    std::optional<std::string> context = expect_string("context string");
    if (!context) return;
    if (!expect_statement_end()) return;
    model_.name = std::move(*name);
    model_.context = std::move(*context);
    model_.span = kw_span;
  }

  void parse_loss() {
    Loss loss;
    const Token* id_token = expect(Token::Type::Word, "loss identifier");
    if (!id_token) return;
    loss.id = Identifier(id_token->text);
    loss.span = id_token->span;
    std::optional<std::string> description = expect_string("description string");
    if (!description) return;
    loss.description = std::move(*description);
    if (peek().type == Token::Type::Word && peek().text == "priority") {
      advance();
      const Token* value = expect(Token::Type::Integer, "priority value");
      if (!value) return;
      if (value->number < 1) {
        error("E006", "priority must be a positive integer", value->span);
        return;
      }
      loss.priority = static_cast<int>(value->number);
    }
    if (!expect_statement_end()) return;
    insert_unique(model_.losses, std::move(loss), "loss", id_token->span);
  }

  void parse_hazard() {
    Hazard hazard;
    const Token* id_token = expect(Token::Type::Word, "hazard identifier");
    if (!id_token) return;
    hazard.id = Identifier(id_token->text);
    hazard.span = id_token->span;
    std::optional<std::string> description = expect_string("description string");
    if (!description) return;
    hazard.description = std::move(*description);
    if (!expect_keyword("leads_to")) return;
    std::optional<std::vector<Identifier>> losses = expect_id_list("leads_to");
    if (!losses) return;
    hazard.leads_to = std::move(*losses);
    if (!expect_statement_end()) return;
    insert_unique(model_.hazards, std::move(hazard), "hazard", id_token->span);
  }

  void parse_constraint() {
    SystemConstraint constraint;
    const Token* id_token = expect(Token::Type::Word, "constraint identifier");
    if (!id_token) return;
    constraint.id = Identifier(id_token->text);
    constraint.span = id_token->span;
    if (!expect_keyword("inverts")) return;
    std::optional<Identifier> hazard = expect_id("hazard identifier");
    if (!hazard) return;
    constraint.inverts = std::move(*hazard);
    std::optional<std::string> description = expect_string("description string");
    if (!description) return;
    constraint.description = std::move(*description);
    if (!expect_statement_end()) return;
    insert_unique(model_.constraints, std::move(constraint), "constraint", id_token->span);
  }

  void parse_entity() {
    Entity entity;
    const Token* id_token = expect(Token::Type::Word, "entity identifier");
    if (!id_token) return;
    entity.id = Identifier(id_token->text);
    entity.span = id_token->span;
    std::optional<std::string> name = expect_string("display name string");
    if (!name) return;
    entity.display_name = std::move(*name);
    if (!expect_keyword("kind")) return;
    const Token* kind_token = expect(Token::Type::Word, "entity kind");
    if (!kind_token) return;
    std::optional<EntityKind> kind = entity_kind_from_keyword(kind_token->text);
    if (!kind) {
      error("E001", "expected entity kind (controller|process|both)", kind_token->span);
      return;
    }
    entity.kind = *kind;
    if (peek().type == Token::Type::Word && peek().text == "boundary") {
      advance();
      const Token* boundary_token = expect(Token::Type::Word, "boundary");
      if (!boundary_token) return;
      std::optional<Boundary> boundary = boundary_from_keyword(boundary_token->text);
      if (!boundary) {
        error("E001", "expected boundary (inside|outside)", boundary_token->span);
        return;
      }
      entity.boundary = *boundary;
    }
    if (!expect_statement_end()) return;
    insert_unique(model_.entities, std::move(entity), "entity", id_token->span);
  }

  // Shared by `ca` and `fb`: `<kw> <ID> from <ID> to <ID> "<text>"`.
  template <typename Link, typename Map>
  void parse_link(Map& map, std::string_view kind_name) {
    Link link;
    const Token* id_token = expect(Token::Type::Word, "identifier");
    if (!id_token) return;
    link.id = Identifier(id_token->text);
    link.span = id_token->span;
    if (!expect_keyword("from")) return;
    std::optional<Identifier> source = expect_id("source entity identifier");
    if (!source) return;
    link.source = std::move(*source);
    if (!expect_keyword("to")) return;
    std::optional<Identifier> target = expect_id("target entity identifier");
    if (!target) return;
    link.target = std::move(*target);
    std::optional<std::string> description = expect_string("description string");
    if (!description) return;
    link.description = std::move(*description);
    if (!expect_statement_end()) return;
    insert_unique(map, std::move(link), kind_name, id_token->span);
  }

  void parse_control_action() { parse_link<ControlAction>(model_.control_actions, "control action"); }

  void parse_feedback() { parse_link<FeedbackLink>(model_.feedback_links, "feedback link"); }

  std::optional<GuidePhrase> expect_guide_phrase() {
    const Token* token = expect(Token::Type::Word, "guide phrase");
    if (!token) return std::nullopt;
    std::optional<GuidePhrase> phrase = guide_phrase_from_keyword(token->text);
    if (!phrase) {
      error("E001",
            "expected guide phrase (not_provided|provided_unsafe|wrong_timing|wrong_duration)",
            token->span);
    }
    return phrase;
  }

  void parse_uca() {
    UcaRecord uca;
    const Token* id_token = expect(Token::Type::Word, "uca identifier");
    if (!id_token) return;
    uca.id = Identifier(id_token->text);
    uca.span = id_token->span;
    if (!expect_keyword("on")) return;
    std::optional<Identifier> ca = expect_id("control action identifier");
    if (!ca) return;
    uca.on = std::move(*ca);
    if (!expect_keyword("type")) return;
    std::optional<GuidePhrase> phrase = expect_guide_phrase();
    if (!phrase) return;
    uca.phrase = *phrase;
    if (!expect_keyword("context")) return;
    std::optional<std::string> context = expect_string("context string");
    if (!context) return;
    uca.context = std::move(*context);
    if (!expect_keyword("hazards")) return;
    std::optional<std::vector<Identifier>> hazards = expect_id_list("hazards");
    if (!hazards) return;
    uca.hazards = std::move(*hazards);
    if (!expect_statement_end()) return;
    insert_unique(model_.ucas, std::move(uca), "uca", id_token->span);
  }

  void parse_assessment() {
    AssessmentRecord record;
    const Token* ca_token = expect(Token::Type::Word, "control action identifier");
    if (!ca_token) return;
    record.on = Identifier(ca_token->text);
    record.span = ca_token->span;
    if (!expect_keyword("type")) return;
    std::optional<GuidePhrase> phrase = expect_guide_phrase();
    if (!phrase) return;
    record.phrase = *phrase;
    if (!expect_keyword("none")) return;
    std::optional<std::string> justification = expect_string("justification string");
    if (!justification) return;
    record.justification = std::move(*justification);
    if (!expect_statement_end()) return;
    model_.assessments.push_back(std::move(record));
  }

  void parse_scenario() {
    LossScenario scenario;
    const Token* id_token = expect(Token::Type::Word, "scenario identifier");
    if (!id_token) return;
    scenario.id = Identifier(id_token->text);
    scenario.span = id_token->span;
    if (!expect_keyword("on")) return;
    std::optional<Identifier> uca = expect_id("uca identifier");
    if (!uca) return;
    scenario.on = std::move(*uca);
    if (!expect_keyword("category")) return;
    const Token* category_token = expect(Token::Type::Word, "category");
    if (!category_token) return;
    std::optional<ScenarioCategory> category = category_from_keyword(category_token->text);
    if (!category) {
      error("E001",
            "expected category (human|organisational|operational|technical|feedback)",
            category_token->span);
      return;
    }
    scenario.category = *category;
    std::optional<std::string> description = expect_string("description string");
    if (!description) return;
    scenario.description = std::move(*description);
    if (peek().type == Token::Type::Word && peek().text == "mechanism") {
      advance();
      const Token* mech_token = expect(Token::Type::Word, "mechanism");
      if (!mech_token) return;
      std::optional<CausalMechanism> mechanism = mechanism_from_keyword(mech_token->text);
      if (!mechanism) {
        error("E001",
              "expected mechanism (physical_failure|inadequate_control_algorithm|"
              "unsafe_control_input|inadequate_process_model)",
              mech_token->span);
        return;
      }
      scenario.mechanism = *mechanism;
    }
    if (!expect_statement_end()) return;
    insert_unique(model_.scenarios, std::move(scenario), "scenario", id_token->span);
  }

  void parse_mitigation() {
    Mitigation mitigation;
    const Token* id_token = expect(Token::Type::Word, "mitigation identifier");
    if (!id_token) return;
    mitigation.id = Identifier(id_token->text);
    mitigation.span = id_token->span;
    if (!expect_keyword("addresses")) return;
    std::optional<std::vector<Identifier>> scenarios = expect_id_list("addresses");
    if (!scenarios) return;
    mitigation.addresses = std::move(*scenarios);
    std::optional<std::string> description = expect_string("description string");
    if (!description) return;
    mitigation.description = std::move(*description);
    if (peek().type == Token::Type::Word && peek().text == "status") {
      advance();
      const Token* status_token = expect(Token::Type::Word, "status");
      if (!status_token) return;
      std::optional<MitigationStatus> status = status_from_keyword(status_token->text);
      if (!status) {
        error("E001", "expected status (proposed|implemented|verified)", status_token->span);
        return;
      }
      mitigation.status = *status;
    }
    if (!expect_statement_end()) return;
    insert_unique(model_.mitigations, std::move(mitigation), "mitigation", id_token->span);
  }

  std::string_view text_;
  std::string file_;
  StpaModel model_;
  std::vector<Diagnostic> diagnostics_;
  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
  bool seen_header_ = false;
  bool header_error_reported_ = false;
};

}  // namespace

ParseResult parse(std::string_view text, std::string file_name) {
  return Parser(text, std::move(file_name)).run();
}

}  // namespace stpa
