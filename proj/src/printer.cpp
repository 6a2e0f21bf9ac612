#include "syncalg/dsl.hpp"

namespace sra {
namespace {

// binding strength: choice < sync < seq < prim
enum Level { kChoice = 0, kSync = 1, kSeq = 2, kPrim = 3 };

Level levelOf(const Command& c) {
  switch (c.kind()) {
    case Kind::Choice: return kChoice;
    case Kind::Par:
    case Kind::Conj: return kSync;
    case Kind::Seq: return kSeq;
    case Kind::Atom: {
      const auto& a = c.atomic();
      return (!a.prog.isEmpty() && !a.env.isEmpty() && !(a.prog == a.env)) ? kChoice : kPrim;
    }
    default: return kPrim;
  }
}

void emit(const Command& c, std::string& out);

void emitAt(const Command& c, Level need, std::string& out) {
  if (levelOf(c) < need) {
    out += '(';
    emit(c, out);
    out += ')';
  } else {
    emit(c, out);
  }
}

void emitAtomic(const AtomicCmd& a, std::string& out) {
  if (a.prog == a.env) {
    out += "step " + formatRel(a.prog);
  } else if (a.env.isEmpty()) {
    out += "pi " + formatRel(a.prog);
  } else if (a.prog.isEmpty()) {
    out += "eps " + formatRel(a.env);
  } else {
    out += "pi " + formatRel(a.prog) + " | eps " + formatRel(a.env);
  }
}

void emit(const Command& c, std::string& out) {
  switch (c.kind()) {
    case Kind::Abort:
      out += "abort";
      return;
    case Kind::Test:
      if (c.testSet().isAll())
        out += "nil";
      else if (c.testSet().isEmpty())
        out += "magic";
      else
        out += "test " + formatSet(c.testSet());
      return;
    case Kind::Atom:
      emitAtomic(c.atomic(), out);
      return;
    case Kind::Choice: {
      bool first = true;
      for (const auto& k : c.kids()) {
        if (!first) out += " | ";
        first = false;
        emitAt(k, kSync, out);
      }
      return;
    }
    case Kind::Seq:
      emitAt(c.kid(0), kSeq, out);
      out += " ; ";
      emitAt(c.kid(1), kSeq, out);
      return;
    case Kind::Par:
    case Kind::Conj: {
      const char* word = c.kind() == Kind::Par ? " || " : " cap ";
      // chains are left-nested with a single operator
      const auto& l = c.kid(0);
      if (l.kind() == c.kind())
        emit(l, out);
      else
        emitAt(l, kSeq, out);
      out += word;
      emitAt(c.kid(1), kSeq, out);
      return;
    }
    case Kind::Pow:
      out += "pow(";
      emit(c.kid(0), out);
      out += ", " + std::to_string(c.exponent()) + ")";
      return;
    case Kind::Fin:
    case Kind::Om:
    case Kind::Inf:
      out += c.kind() == Kind::Fin ? "fin(" : c.kind() == Kind::Om ? "om(" : "inf(";
      emit(c.kid(0), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Command& c) {
  if (!c.valid()) return "<none>";
  std::string out;
  emit(c, out);
  return out;
}

}  // namespace sra
