#ifndef CAMLOC_CAMLOC_HPP
#define CAMLOC_CAMLOC_HPP

// Point-localisation accuracy of circular camera arrays, modelled as a
// quantised frame expansion.

#include "camloc/camera_model.hpp"
#include "camloc/error.hpp"
#include "camloc/experiments.hpp"
#include "camloc/geometry.hpp"
#include "camloc/io.hpp"
#include "camloc/localise.hpp"
#include "camloc/partition.hpp"

#endif  // CAMLOC_CAMLOC_HPP
