#pragma once

#include "vec2.hpp"
#include "roots.hpp"
#include "norm.hpp"
#include "ortho.hpp"
#include "bisector.hpp"
#include "theorems.hpp"
#include "io.hpp"
#include "cli.hpp"
