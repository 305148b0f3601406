#pragma once

#include "biconic/cli.hpp"
#include "biconic/conic.hpp"
#include "biconic/hilbert.hpp"
#include "biconic/localpoints.hpp"
#include "biconic/propagate.hpp"
#include "biconic/spec_file.hpp"
#include "biconic/surface.hpp"
