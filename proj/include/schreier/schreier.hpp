#pragma once

#include "schreier/error.hpp"
#include "schreier/ordinal.hpp"
#include "schreier/finset.hpp"
#include "schreier/rational.hpp"
#include "schreier/family.hpp"
#include "schreier/analysis.hpp"
#include "schreier/norms.hpp"
#include "schreier/trees.hpp"
#include "schreier/random.hpp"
#include "schreier/json.hpp"
#include "schreier/suites.hpp"
