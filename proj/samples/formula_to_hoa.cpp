// Translates a formula to an LDGBA, prints it as HOA and checks two words.
#include <iostream>

#include "ldgba/automata/acceptance.hpp"
#include "ldgba/automata/hoa.hpp"
#include "ldgba/logic/parser.hpp"
#include "ldgba/logic/semantics.hpp"
#include "ldgba/translate/fragment.hpp"

int main(int argc, char** argv) {
  using namespace ldgba;
  const std::string text = argc > 1 ? argv[1] : "G F a & G F b & G !c";
  const logic::AtomSet atoms{"a", "b", "c"};
  const auto f = logic::parse(text, atoms);
  const auto a = translate::translate(f, atoms);
  std::cout << automata::dump_hoa(a, text);

  const logic::LassoWord alternate{{}, {atoms.symbol({"a"}), atoms.symbol({"b"})}};
  const logic::LassoWord stuck{{atoms.symbol({"a"})}, {atoms.symbol({})}};
  for (const auto& [name, w] : {std::pair{"(a b)^w", alternate}, std::pair{"a {}^w", stuck}})
    std::cout << name << ": automaton " << automata::accepts_lasso(a, w) << ", formula "
              << logic::eval_lasso(f, w, atoms) << "\n";
}
