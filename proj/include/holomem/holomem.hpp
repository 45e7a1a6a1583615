// Umbrella header for the holomem library.
#ifndef HOLOMEM_HOLOMEM_HPP
#define HOLOMEM_HOLOMEM_HPP

#include "core.hpp"
#include "darkspace.hpp"
#include "dynamics.hpp"
#include "fock.hpp"
#include "holonomy.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "protocol.hpp"
#include "schedule.hpp"

#endif
