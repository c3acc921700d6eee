#pragma once

#include "krich/adelic2d.hpp"
#include "krich/curve.hpp"
#include "krich/diagram.hpp"
#include "krich/error.hpp"
#include "krich/expression.hpp"
#include "krich/field.hpp"
#include "krich/io.hpp"
#include "krich/krichever1d.hpp"
#include "krich/lattice.hpp"
#include "krich/matrix.hpp"
#include "krich/series.hpp"
#include "krich/verify.hpp"
