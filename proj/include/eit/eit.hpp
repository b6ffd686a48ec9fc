#pragma once

#include <eit/analytic.hpp>
#include <eit/bloch.hpp>
#include <eit/config.hpp>
#include <eit/core.hpp>
#include <eit/csv.hpp>
#include <eit/fft.hpp>
#include <eit/polariton.hpp>
#include <eit/propagation.hpp>
#include <eit/quadrature.hpp>
#include <eit/schedule.hpp>
#include <eit/sweep.hpp>
