#pragma once

#include "infsup/bound_engine.hpp"
#include "infsup/channel_geometry.hpp"
#include "infsup/fourier_ops.hpp"
#include "infsup/gap_example.hpp"
#include "infsup/json_io.hpp"
#include "infsup/quadrature.hpp"
#include "infsup/rectangle_norms.hpp"
#include "infsup/window_certificates.hpp"
