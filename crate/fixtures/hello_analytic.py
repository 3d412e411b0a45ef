import numpy as np
import sys
input_data_filename = 'my_input.txt'
input_data = np.loadtxt(input_data_filename)
mean = np.mean(input_data)
std = np.std(input_data)
print('mean = ',mean)
print('std = ',std)
sys.exit(0)
