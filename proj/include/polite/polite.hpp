#ifndef POLITE_POLITE_HPP
#define POLITE_POLITE_HPP

#include "logic.hpp"
#include "parse.hpp"
#include "structure.hpp"
#include "search.hpp"
#include "arrangements.hpp"
#include "foracle.hpp"
#include "theories.hpp"
#include "witnesses.hpp"
#include "combination.hpp"
#include "lab.hpp"
#include "json_io.hpp"

#endif  // POLITE_POLITE_HPP
