#pragma once

#include "tlp/errors.hpp"
#include "tlp/model.hpp"
#include "tlp/eagerness.hpp"
#include "tlp/word.hpp"
#include "tlp/structure_automaton.hpp"
#include "tlp/blueprint.hpp"
#include "tlp/rules_automaton.hpp"
#include "tlp/oracle.hpp"
#include "tlp/solver.hpp"
#include "tlp/allen.hpp"
#include "tlp/parser.hpp"
#include "tlp/json_io.hpp"
#include "tlp/dot.hpp"
