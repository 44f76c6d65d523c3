#pragma once

#include <acide/admission.hpp>
#include <acide/core.hpp>
#include <acide/experiments.hpp>
#include <acide/io.hpp>
#include <acide/sim.hpp>
