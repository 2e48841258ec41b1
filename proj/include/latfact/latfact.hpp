#pragma once

#include "latfact/chains.hpp"
#include "latfact/error.hpp"
#include "latfact/factorization.hpp"
#include "latfact/io.hpp"
#include "latfact/lattice.hpp"
#include "latfact/oracle.hpp"
#include "latfact/pipeline.hpp"
#include "latfact/polynomial.hpp"
#include "latfact/table.hpp"
