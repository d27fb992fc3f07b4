"""Rotations, orientation integration, and geodetic anchoring.

Walks through the frame algebra the simulator is built on: quaternion
rotations between the body and world frames, advancing an orientation
from a body angular rate, and mapping local meters to latitude and
longitude for map export.
"""

import math

import numpy as np

import dronesim as ds

# A quaternion encodes the body-to-world rotation. A quarter turn about
# the vertical sends the body x axis (forward) onto world y (north).
quarter_turn = ds.quat_from_axis_angle([0, 0, 1], math.pi / 2)
forward_world = ds.rotate(quarter_turn, [1.0, 0.0, 0.0])
print("body x after a 90 degree yaw:", forward_world.round(12))

# Rotations never change a vector's length.
v = np.array([3.0, -2.0, 6.0])
print("norm before/after:", np.linalg.norm(v), np.linalg.norm(ds.rotate(quarter_turn, v)))

# Composition of two rotations is the quaternion product.
pitch = ds.quat_from_axis_angle([0, 1, 0], 0.3)
combined = ds.quat_multiply(quarter_turn, pitch)
print("composed == sequential:",
      np.allclose(ds.rotate(combined, v), ds.rotate(quarter_turn, ds.rotate(pitch, v))))

# A drone spinning at pi rad/s about z for one second ends up facing
# backwards. Integrating the attitude kinematics in small steps lands on
# the closed-form half-turn quaternion.
q = ds.quat_identity()
for _ in range(10_000):
    q = ds.integrate_orientation(q, [0.0, 0.0, math.pi], 1e-4)
print("integrated half turn:", q.round(9))
print("closed form:         ", ds.quat_from_axis_angle([0, 0, 1], math.pi).round(9))

# World anchoring: the scenario origin pins local ENU meters to the
# globe. One degree of latitude is about 111.19 km of northing.
frame = ds.InertialFrame(latitude_deg=41.109, longitude_deg=16.879, altitude_m=10.0)
meridian_degree = 2 * math.pi * ds.EARTH_RADIUS_M / 360
lat, lon, alt = ds.geo_project(frame, [0.0, meridian_degree, 25.0])
print(f"{meridian_degree:.1f} m north of the origin -> lat {lat:.6f} deg "
      f"(origin {frame.latitude_deg}), alt {alt} m")
east, north, up = ds.geo_unproject(frame, lat, lon, alt)
print("and back to meters:", round(east, 6), round(north, 3), up)
