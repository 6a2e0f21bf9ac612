#include <algorithm>
#include <cctype>
#include <optional>

#include "syncalg/dsl.hpp"

namespace sra {
namespace {

enum class Tok { End, Ident, Var, Num, LParen, RParen, LBrace, RBrace, Comma, Bar, BarBar, Semi, Tilde, Amp, Plus };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto isWord = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, c), start});
      ++i;
    };
    switch (c) {
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case '{': single(Tok::LBrace); continue;
      case '}': single(Tok::RBrace); continue;
      case ',': single(Tok::Comma); continue;
      case ';': single(Tok::Semi); continue;
      case '~': single(Tok::Tilde); continue;
      case '&': single(Tok::Amp); continue;
      case '+': single(Tok::Plus); continue;
      case '|':
        if (i + 1 < s.size() && s[i + 1] == '|') {
          out.push_back({Tok::BarBar, "||", start});
          i += 2;
        } else {
          single(Tok::Bar);
        }
        continue;
      default:
        break;
    }
    if (c == '$') {
      ++i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      if (i == start + 1) throw ParseError("empty placeholder name", start);
      out.push_back({Tok::Var, std::string(s.substr(start + 1, i - start - 1)), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Num, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && isWord(s[i])) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx) : toks_(lex(text)), ctx_(ctx) {
    if (!ctx_.space) throw UsageError("parse needs a state space");
  }

  Command command() {
    Command c = choice();
    expect(Tok::End, "end of input");
    return c;
  }

  StateSet wholeSet() {
    StateSet s = setExpr();
    expect(Tok::End, "end of input");
    return s;
  }

  StateRel wholeRel() {
    StateRel r = relExpr();
    expect(Tok::End, "end of input");
    return r;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool atIdent(std::string_view word) const { return peek().kind == Tok::Ident && peek().text == word; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw ParseError(msg + (t.kind == Tok::End ? " but found end of input" : " but found '" + t.text + "'"), t.pos);
  }

  const Binding& lookup(const Token& t) const {
    auto it = ctx_.vars.find(t.text);
    if (it == ctx_.vars.end()) throw ParseError("unbound placeholder $" + t.text, t.pos);
    return it->second;
  }

  // ---- commands

  Command choice() {
    std::vector<Command> alts{syncChain()};
    while (accept(Tok::Bar)) alts.push_back(syncChain());
    if (alts.size() == 1) return alts.front();
    return Command::choice(std::move(alts));
  }

  Command syncChain() {
    Command acc = seqChain();
    std::optional<std::string> opWord;
    while (true) {
      std::string word;
      SyncOp op;
      if (peek().kind == Tok::BarBar) {
        word = "||";
        op = SyncOp::Par;
      } else if (atIdent("cap")) {
        word = "cap";
        op = SyncOp::Conj;
      } else if (atIdent("sync")) {
        word = "sync";
        op = ctx_.op;
      } else {
        break;
      }
      if (opWord && *opWord != word) fail("mixed synchronisation operators need parentheses");
      opWord = word;
      next();
      acc = Command::sync(op, acc, seqChain());
    }
    return acc;
  }

  Command seqChain() {
    Command acc = prim();
    while (accept(Tok::Semi)) acc = Command::seq(acc, prim());
    return acc;
  }

  Command parenthesized() {
    expect(Tok::LParen, "'('");
    Command c = choice();
    expect(Tok::RParen, "')'");
    return c;
  }

  unsigned nat() {
    unsigned value = 0;
    const Token& t = next();
    if (t.kind == Tok::Num) {
      value = static_cast<unsigned>(std::stoul(t.text));
    } else if (t.kind == Tok::Var) {
      const auto& b = lookup(t);
      if (!std::holds_alternative<unsigned>(b)) throw ParseError("$" + t.text + " is not a natural number", t.pos);
      value = std::get<unsigned>(b);
    } else {
      throw ParseError("expected a natural number", t.pos);
    }
    while (accept(Tok::Plus)) value += static_cast<unsigned>(std::stoul(expect(Tok::Num, "a number").text));
    return value;
  }

  Command prim() {
    const auto& space = ctx_.space;
    const Token& t = peek();
    if (t.kind == Tok::LParen) return parenthesized();
    if (t.kind == Tok::Var) {
      next();
      const auto& b = lookup(t);
      if (!std::holds_alternative<Command>(b)) throw ParseError("$" + t.text + " is not a command", t.pos);
      return std::get<Command>(b);
    }
    if (t.kind != Tok::Ident) fail("expected a command");
    const std::string word = t.text;
    next();
    auto unary = [&](Command (*make)(Command)) { return make(parenthesized()); };

    if (word == "abort") return Command::abort(space);
    if (word == "magic") return Command::magic(space);
    if (word == "nil") return Command::nil(space);
    if (word == "iota") return iotaCmd(ctx_.op, space);
    if (word == "term") return termCmd(space);
    if (word == "fair") return fairCmd(space);
    if (word == "idle") return idleCmd(space);
    if (word == "test") return Command::test(setTerm());
    if (word == "assert") return assertCmd(setTerm());
    if (word == "inv") return invCmd(setTerm());
    if (word == "pi") return Command::atom(AtomicCmd::pi(relTerm()));
    if (word == "eps") return Command::atom(AtomicCmd::eps(relTerm()));
    if (word == "step") return Command::atom(AtomicCmd::step(relTerm()));
    if (word == "guar") return guarCmd(relTerm());
    if (word == "rely") return relyCmd(relTerm());
    if (word == "evolve") return evolveCmd(relTerm());
    if (word == "fin") return unary(&Command::fin);
    if (word == "om") return unary(&Command::om);
    if (word == "inf") return unary(&Command::inf);
    if (word == "pow") {
      expect(Tok::LParen, "'('");
      Command body = choice();
      expect(Tok::Comma, "','");
      unsigned n = nat();
      expect(Tok::RParen, "')'");
      return Command::pow(body, n);
    }
    if (auto h = ctx_.hooks.find(word); h != ctx_.hooks.end() && peek().kind == Tok::LParen) {
      next();
      std::vector<HookArg> args;
      if (peek().kind != Tok::RParen) {
        do {
          if (peek().kind == Tok::Num ||
              (peek().kind == Tok::Var && ctx_.vars.count(peek().text) &&
               std::holds_alternative<unsigned>(ctx_.vars.find(peek().text)->second)))
            args.emplace_back(nat());
          else
            args.emplace_back(choice());
        } while (accept(Tok::Comma));
      }
      expect(Tok::RParen, "')'");
      return h->second(args);
    }
    throw ParseError("unknown command '" + word + "'", t.pos);
  }

  // ---- state sets

  StateId stateName() {
    const Token& t = expect(Tok::Ident, "a state name");
    auto id = ctx_.space->find(t.text);
    if (!id) throw ParseError("unknown state '" + t.text + "'", t.pos);
    return *id;
  }

  StateSet setExpr() {
    StateSet acc = setMeet();
    while (accept(Tok::Plus)) acc = acc | setMeet();
    return acc;
  }

  StateSet setMeet() {
    StateSet acc = setTerm();
    while (accept(Tok::Amp)) acc = acc & setTerm();
    return acc;
  }

  StateSet setTerm() {
    const auto& space = ctx_.space;
    const Token& t = peek();
    if (accept(Tok::Tilde)) return setTerm().complement();
    if (accept(Tok::LParen)) {
      StateSet s = setExpr();
      expect(Tok::RParen, "')'");
      return s;
    }
    if (t.kind == Tok::Var) {
      next();
      const auto& b = lookup(t);
      if (!std::holds_alternative<StateSet>(b)) throw ParseError("$" + t.text + " is not a state set", t.pos);
      return std::get<StateSet>(b);
    }
    if (atIdent("all") || atIdent("univ")) {
      next();
      return StateSet::all(space);
    }
    expect(Tok::LBrace, "a state set");
    std::uint64_t bits = 0;
    if (peek().kind != Tok::RBrace) {
      do bits |= std::uint64_t{1} << stateName();
      while (accept(Tok::Comma));
    }
    expect(Tok::RBrace, "'}'");
    return {space, bits};
  }

  // ---- relations

  StateRel relExpr() {
    StateRel acc = relMeet();
    while (accept(Tok::Plus)) acc = acc | relMeet();
    return acc;
  }

  StateRel relMeet() {
    StateRel acc = relTerm();
    while (accept(Tok::Amp)) acc = acc & relTerm();
    return acc;
  }

  StateRel relTerm() {
    const auto& space = ctx_.space;
    const Token& t = peek();
    if (accept(Tok::Tilde)) return relTerm().complement();
    if (accept(Tok::LParen)) {
      StateRel r = relExpr();
      expect(Tok::RParen, "')'");
      return r;
    }
    if (t.kind == Tok::Var) {
      next();
      const auto& b = lookup(t);
      if (!std::holds_alternative<StateRel>(b)) throw ParseError("$" + t.text + " is not a relation", t.pos);
      return std::get<StateRel>(b);
    }
    if (atIdent("id")) {
      next();
      return StateRel::identity(space);
    }
    if (atIdent("univ")) {
      next();
      return StateRel::universal(space);
    }
    if (atIdent("prer")) {
      next();
      return prer(setTerm());
    }
    if (atIdent("postr")) {
      next();
      return postr(setTerm());
    }
    expect(Tok::LBrace, "a relation");
    StateRel acc = StateRel::empty(space);
    if (peek().kind != Tok::RBrace) {
      do {
        expect(Tok::LParen, "'('");
        StateId a = stateName();
        expect(Tok::Comma, "','");
        StateId b = stateName();
        expect(Tok::RParen, "')'");
        acc = acc | StateRel::of(space, {{a, b}});
      } while (accept(Tok::Comma));
    }
    expect(Tok::RBrace, "'}'");
    return acc;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ParseContext& ctx_;
};

}  // namespace

Command parse(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).command(); }

Command parse(std::string_view text, const SpacePtr& space, SyncOp op) {
  ParseContext ctx;
  ctx.space = space;
  ctx.op = op;
  return parse(text, ctx);
}

StateSet parseSet(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).wholeSet(); }
StateRel parseRel(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).wholeRel(); }

}  // namespace sra
