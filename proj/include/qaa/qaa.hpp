#pragma once

#include "qaa/gates.hpp"
#include "qaa/circuit.hpp"
#include "qaa/simulator.hpp"
#include "qaa/resources.hpp"
#include "qaa/qasm.hpp"
#include "qaa/primitives.hpp"
#include "qaa/stateprep.hpp"
#include "qaa/linsys.hpp"
#include "qaa/polyeval.hpp"
