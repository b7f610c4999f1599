#pragma once

#include "pip/decomposition.hpp"
#include "pip/error.hpp"
#include "pip/geometry.hpp"
#include "pip/instrument.hpp"
#include "pip/linearpip.hpp"
#include "pip/monomials.hpp"
#include "pip/nodegen.hpp"
#include "pip/nodeset.hpp"
#include "pip/onedim.hpp"
#include "pip/pipsolver.hpp"
#include "pip/polynomial.hpp"
#include "pip/vandermonde.hpp"
#include "pip/io.hpp"
#include "pip/bench.hpp"
