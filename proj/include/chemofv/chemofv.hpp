#pragma once

#include "chemofv/model.hpp"
#include "chemofv/riemann.hpp"
#include "chemofv/wellbalanced.hpp"
#include "chemofv/parabolic.hpp"
#include "chemofv/steady.hpp"
#include "chemofv/initial_data.hpp"
#include "chemofv/driver.hpp"
#include "chemofv/config.hpp"
#include "chemofv/output.hpp"
