#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "syncalg/command.hpp"

namespace sra {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Value bound to a `$name` placeholder.
using Binding = std::variant<Command, StateSet, StateRel, unsigned>;
using HookArg = std::variant<Command, unsigned>;
using Hook = std::function<Command(const std::vector<HookArg>&)>;

struct ParseContext {
  SpacePtr space;
  // what `sync` and `iota` stand for
  SyncOp op = SyncOp::Par;
  std::map<std::string, Binding, std::less<>> vars;
  // `name(arg, ...)` calls computed by the caller
  std::map<std::string, Hook, std::less<>> hooks;
};

// Grammar (lowest to highest precedence):
//   cmd    := syncl ("|" syncl)*
//   syncl  := seq (("||" seq)* | ("cap" seq)* | ("sync" seq)*)
//   seq    := prim (";" prim)*
//   prim   := abort | magic | nil | iota | term | fair | idle
//           | test SET | assert SET | inv SET
//           | pi REL | eps REL | step REL | guar REL | rely REL | evolve REL
//           | fin(cmd) | om(cmd) | inf(cmd) | pow(cmd, nat) | (cmd) | $var | hook(args)
//   SET    := {s0,s1} | all | univ | ~SET | SET & SET | SET + SET | $p | (SET)
//   REL    := {(s0,s1)} | id | univ | ~REL | REL & REL | REL + REL | prer SET | postr SET | $r | (REL)
//   nat    := NUM | $i | nat + NUM
Command parse(std::string_view text, const ParseContext& ctx);
Command parse(std::string_view text, const SpacePtr& space, SyncOp op = SyncOp::Par);
StateSet parseSet(std::string_view text, const ParseContext& ctx);
StateRel parseRel(std::string_view text, const ParseContext& ctx);

std::string print(const Command& c);

}  // namespace sra
