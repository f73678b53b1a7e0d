#pragma once

#include "genmod/error.hpp"
#include "genmod/graph.hpp"
#include "genmod/io.hpp"
#include "genmod/modmat.hpp"
#include "genmod/spectral.hpp"
#include "genmod/partition.hpp"
#include "genmod/oracles.hpp"
#include "genmod/generators.hpp"
#include "genmod/serialize.hpp"
