#pragma once

#include "papeq/cli.hpp"
#include "papeq/config.hpp"
#include "papeq/equations.hpp"
#include "papeq/errors.hpp"
#include "papeq/gamma.hpp"
#include "papeq/io.hpp"
#include "papeq/mild.hpp"
#include "papeq/pap.hpp"
#include "papeq/problem.hpp"
#include "papeq/spectral.hpp"
