#pragma once

#include "sixvertex/bethe.hpp"
#include "sixvertex/cyclo.hpp"
#include "sixvertex/errors.hpp"
#include "sixvertex/identities.hpp"
#include "sixvertex/intertwine.hpp"
#include "sixvertex/sector_operator.hpp"
#include "sixvertex/spectra.hpp"
#include "sixvertex/vertex_ops.hpp"
