package org.gudy.azureus2.core3.disk;

public interface DiskManagerReadRequest {
    int getPieceNumber();

    int getOffset();

    int getLength();
}
