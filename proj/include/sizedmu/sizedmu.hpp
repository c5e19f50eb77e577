#pragma once

#include "sizedmu/error.hpp"
#include "sizedmu/finset.hpp"
#include "sizedmu/signature.hpp"
#include "sizedmu/size.hpp"
#include "sizedmu/colimit.hpp"
#include "sizedmu/functors.hpp"
#include "sizedmu/iteration.hpp"
#include "sizedmu/checks.hpp"
#include "sizedmu/dsl.hpp"
#include "sizedmu/driver.hpp"
