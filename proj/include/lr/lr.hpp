#ifndef LR_LR_HPP
#define LR_LR_HPP

#include "syntax.hpp"
#include "surface.hpp"
#include "heap.hpp"
#include "statics.hpp"
#include "dynamics.hpp"
#include "verdict.hpp"
#include "generate.hpp"
#include "logrel.hpp"
#include "relational.hpp"
#include "indexed_predicate.hpp"
#include "stepworld.hpp"
#include "context.hpp"

#endif
