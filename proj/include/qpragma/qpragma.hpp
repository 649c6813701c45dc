#pragma once

#include "qpragma/core.hpp"
#include "qpragma/subspace.hpp"
#include "qpragma/extension.hpp"
#include "qpragma/formula.hpp"
#include "qpragma/model.hpp"
#include "qpragma/pragmatics.hpp"
#include "qpragma/quotient.hpp"
#include "qpragma/axioms.hpp"
