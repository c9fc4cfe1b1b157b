#pragma once

#include "spdgeo/error.hpp"
#include "spdgeo/matcore.hpp"
#include "spdgeo/means.hpp"
#include "spdgeo/metric.hpp"
#include "spdgeo/quadrature.hpp"
#include "spdgeo/geodesic.hpp"
#include "spdgeo/parallel.hpp"
#include "spdgeo/shortest.hpp"
#include "spdgeo/io.hpp"
#include "spdgeo/verify.hpp"
