#pragma once

#include "projektor/appendix.hpp"
#include "projektor/error.hpp"
#include "projektor/gallery.hpp"
#include "projektor/johnson.hpp"
#include "projektor/parallel.hpp"
#include "projektor/random.hpp"
#include "projektor/regularity.hpp"
#include "projektor/rng.hpp"
#include "projektor/schedule.hpp"
#include "projektor/subspace.hpp"
#include "projektor/transport.hpp"
